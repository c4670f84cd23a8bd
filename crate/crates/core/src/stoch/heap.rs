/// Binary min-heap over `n` keys with position tracking, so any key's
/// priority can be changed in `O(log n)`. Ties break on the lower index.
#[derive(Debug, Clone)]
pub(crate) struct IndexedHeap {
    /// Heap order of key indices.
    heap: Vec<usize>,
    /// Position of each key in `heap`.
    pos: Vec<usize>,
    prio: Vec<f64>,
}

impl IndexedHeap {
    pub fn new(priorities: Vec<f64>) -> Self {
        let n = priorities.len();
        let mut h = IndexedHeap { heap: (0..n).collect(), pos: (0..n).collect(), prio: priorities };
        for i in (0..n / 2).rev() {
            h.sift_down(i);
        }
        h
    }

    /// Key with the smallest priority and that priority.
    pub fn peek(&self) -> Option<(usize, f64)> {
        self.heap.first().map(|&k| (k, self.prio[k]))
    }

    pub fn priority(&self, key: usize) -> f64 {
        self.prio[key]
    }

    pub fn update(&mut self, key: usize, priority: f64) {
        self.prio[key] = priority;
        self.sift_up(self.pos[key]);
        self.sift_down(self.pos[key]);
    }

    fn less(&self, pa: f64, a: usize, pb: f64, b: usize) -> bool {
        pa < pb || (pa == pb && a < b)
    }

    fn less_at(&self, i: usize, j: usize) -> bool {
        let (a, b) = (self.heap[i], self.heap[j]);
        self.less(self.prio[a], a, self.prio[b], b)
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.heap.swap(i, j);
        self.pos[self.heap[i]] = i;
        self.pos[self.heap[j]] = j;
    }

    fn sift_up(&mut self, mut i: usize) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if self.less_at(i, parent) {
                self.swap(i, parent);
                i = parent;
            } else {
                break;
            }
        }
    }

    fn sift_down(&mut self, mut i: usize) {
        let n = self.heap.len();
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut smallest = i;
            if l < n && self.less_at(l, smallest) {
                smallest = l;
            }
            if r < n && self.less_at(r, smallest) {
                smallest = r;
            }
            if smallest == i {
                break;
            }
            self.swap(i, smallest);
            i = smallest;
        }
    }

    #[cfg(test)]
    fn is_valid(&self) -> bool {
        (1..self.heap.len()).all(|i| !self.less_at(i, (i - 1) / 2))
            && self.heap.iter().enumerate().all(|(i, &k)| self.pos[k] == i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn orders_and_updates() {
        let mut h = IndexedHeap::new(vec![3.0, 1.0, f64::INFINITY, 2.0]);
        assert_eq!(h.peek(), Some((1, 1.0)));
        h.update(1, 5.0);
        assert_eq!(h.peek(), Some((3, 2.0)));
        h.update(2, 0.5);
        assert_eq!(h.peek(), Some((2, 0.5)));
        assert_eq!(h.priority(1), 5.0);
    }

    proptest! {
        #[test]
        fn minimum_after_arbitrary_updates(
            init in prop::collection::vec(0.0f64..100.0, 1..30),
            ops in prop::collection::vec((0usize..30, 0.0f64..100.0), 0..60),
        ) {
            let mut h = IndexedHeap::new(init.clone());
            let mut model = init;
            for (k, p) in ops {
                let k = k % model.len();
                h.update(k, p);
                model[k] = p;
                prop_assert!(h.is_valid());
                let min = model.iter().cloned().fold(f64::INFINITY, f64::min);
                prop_assert_eq!(h.peek().unwrap().1, min);
            }
        }
    }
}

use std::fmt;

/// Byte range in a source document plus the 1-based line/column of its start.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub begin: usize,
    pub end: usize,
    pub line: u32,
    pub column: u32,
}

impl Span {
    pub fn new(begin: usize, end: usize, line: u32, column: u32) -> Self {
        debug_assert!(begin <= end);
        Span { begin, end, line, column }
    }

    /// Smallest span covering both `self` and `other`.
    pub fn to(self, other: Span) -> Span {
        if other.end < self.begin {
            return other.to(self);
        }
        Span { begin: self.begin, end: other.end.max(self.end), line: self.line, column: self.column }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

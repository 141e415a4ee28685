use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::Deref;

use crate::error::{Error, Result};

/// A scalar that can appear in a pattern or text.
///
/// Comparisons use the type's `PartialOrd`, so the only requirement is that
/// the values actually stored are totally ordered. For `f64` this means no
/// NaN; `-0.0` and `0.0` compare equal.
pub trait Element: Copy + PartialOrd + Debug {
    /// `false` for values outside the total order (NaN).
    fn is_comparable(&self) -> bool {
        true
    }
}

impl Element for i32 {}
impl Element for i64 {}

impl Element for f64 {
    #[inline]
    fn is_comparable(&self) -> bool {
        !self.is_nan()
    }
}

pub(crate) fn check_comparable<T: Element>(xs: &[T]) -> Result<()> {
    match xs.iter().position(|v| !v.is_comparable()) {
        Some(index) => Err(Error::Incomparable { index }),
        None => Ok(()),
    }
}

/// A validated, immutable series of elements.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence<T>(Vec<T>);

impl<T: Element> Sequence<T> {
    /// Wraps `values`, rejecting NaN.
    pub fn new(values: Vec<T>) -> Result<Self> {
        check_comparable(&values)?;
        Ok(Sequence(values))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }

    /// Applies `f` to every element. The result is re-validated.
    pub fn map<U: Element>(&self, f: impl FnMut(T) -> U) -> Result<Sequence<U>> {
        Sequence::new(self.0.iter().copied().map(f).collect())
    }
}

impl<T> Deref for Sequence<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> AsRef<[T]> for Sequence<T> {
    fn as_ref(&self) -> &[T] {
        &self.0
    }
}

impl<T: Element> TryFrom<Vec<T>> for Sequence<T> {
    type Error = Error;

    fn try_from(values: Vec<T>) -> Result<Self> {
        Sequence::new(values)
    }
}

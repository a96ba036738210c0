//! Memoized, lazily produced infinite sequences that may refer to themselves.
//!
//! A [`Stream`] is a handle onto a shared buffer of already-produced cells
//! plus a producer for the next one. Cells are produced strictly in index
//! order, each at most once. While cell `k` is being produced the stream is
//! marked in progress at `k`; reading any cell `>= k` from inside that
//! computation is a non-productive definition and fails with
//! [`Error::NonProductive`] instead of looping.
//!
//! Self-reference is expressed with [`Stream::fix`] or with the
//! [`Stream::forward`]/[`Knot::bind`] pair when several streams are defined
//! in terms of each other:
//!
//! ```
//! use corec::Stream;
//!
//! // ones = 1 : ones
//! let ones = Stream::fix(|ones| Stream::cons(1, { let ones = ones.clone(); move || ones }));
//! // integs = 1 : (integs + ones)
//! let integs = Stream::fix(|integs| {
//!     let (integs, ones) = (integs.clone(), ones.clone());
//!     Stream::cons(1, move || &integs + &ones)
//! });
//! assert_eq!(integs.take(4).unwrap(), vec![1, 2, 3, 4]);
//! ```
//!
//! Forced prefixes live as long as any handle to the stream. Definitions that
//! capture their own handle form reference cycles, so such graphs are only
//! reclaimed at process exit.

use std::cell::RefCell;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use crate::error::{Error, Result};

type Producer<T> = Box<dyn FnMut(usize) -> Result<Option<T>>>;

/// Observable state of a single cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellState {
    Unevaluated,
    InProgress,
    Evaluated,
}

struct Inner<T> {
    values: Vec<T>,
    producer: Option<Producer<T>>,
    running: Option<usize>,
    ended: bool,
    failure: Option<Error>,
}

struct Memo<T> {
    inner: RefCell<Inner<T>>,
}

impl<T: Clone> Memo<T> {
    fn new(producer: Option<Producer<T>>) -> Self {
        Memo {
            inner: RefCell::new(Inner {
                values: Vec::new(),
                producer,
                running: None,
                ended: false,
                failure: None,
            }),
        }
    }

    fn finite(values: Vec<T>) -> Self {
        Memo {
            inner: RefCell::new(Inner {
                values,
                producer: None,
                running: None,
                ended: true,
                failure: None,
            }),
        }
    }

    /// `Ok(None)` means the sequence ended before `idx`.
    fn force(&self, idx: usize) -> Result<Option<T>> {
        loop {
            let next;
            let mut producer;
            {
                let mut inner = self.inner.borrow_mut();
                if idx < inner.values.len() {
                    return Ok(Some(inner.values[idx].clone()));
                }
                if inner.ended {
                    return Ok(None);
                }
                if let Some(e) = &inner.failure {
                    return Err(e.clone());
                }
                if let Some(i) = inner.running {
                    return Err(Error::NonProductive { index: i });
                }
                next = inner.values.len();
                producer = match inner.producer.take() {
                    Some(p) => p,
                    None => return Err(Error::Unbound { index: next }),
                };
                inner.running = Some(next);
            }
            let out = producer(next);
            let mut inner = self.inner.borrow_mut();
            inner.running = None;
            match out {
                Ok(Some(v)) => {
                    inner.values.push(v);
                    inner.producer = Some(producer);
                }
                Ok(None) => {
                    inner.ended = true;
                    drop(inner);
                    drop(producer);
                }
                Err(e) => {
                    inner.failure = Some(e.clone());
                    drop(inner);
                    drop(producer);
                    return Err(e);
                }
            }
        }
    }
}

/// A lazily produced, memoized sequence.
///
/// Cloning a stream clones the handle, not the cells.
pub struct Stream<T> {
    memo: Rc<Memo<T>>,
    offset: usize,
}

impl<T> Clone for Stream<T> {
    fn clone(&self) -> Self {
        Stream {
            memo: Rc::clone(&self.memo),
            offset: self.offset,
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Stream<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner = self.memo.inner.borrow();
        let forced = inner.values.get(self.offset..).unwrap_or(&[]);
        f.debug_struct("Stream")
            .field("forced", &forced)
            .field("ended", &inner.ended)
            .finish()
    }
}

/// Write end of a [`Stream::forward`] reference.
pub struct Knot<T> {
    memo: Rc<Memo<T>>,
}

impl<T: Clone + 'static> Knot<T> {
    /// Makes the forward stream read through to `target`.
    pub fn bind(self, target: Stream<T>) {
        let producer: Producer<T> = Box::new(move |k| target.get_opt(k));
        self.memo.inner.borrow_mut().producer = Some(producer);
    }
}

impl<T: Clone + 'static> Stream<T> {
    fn from_producer(p: Producer<T>) -> Self {
        Stream {
            memo: Rc::new(Memo::new(Some(p))),
            offset: 0,
        }
    }

    /// An infinite stream whose cell `k` is `f(k)`. `f` is called once per
    /// cell, in increasing `k`.
    pub fn generate(mut f: impl FnMut(usize) -> Result<T> + 'static) -> Self {
        Self::from_producer(Box::new(move |k| f(k).map(Some)))
    }

    /// Like [`Stream::generate`], but the producer may end the sequence by
    /// returning `None`. Used by the series and tower types, where an ended
    /// sequence means "zero from here on".
    pub fn generate_partial(f: impl FnMut(usize) -> Result<Option<T>> + 'static) -> Self {
        Self::from_producer(Box::new(f))
    }

    /// A finite, fully evaluated sequence.
    pub fn finite(values: Vec<T>) -> Self {
        Stream {
            memo: Rc::new(Memo::finite(values)),
            offset: 0,
        }
    }

    pub fn repeat(x: T) -> Self {
        Self::generate(move |_| Ok(x.clone()))
    }

    /// `h : t` with the tail produced on demand, at most once.
    pub fn cons(head: T, tail: impl FnOnce() -> Stream<T> + 'static) -> Self {
        let mut head = Some(head);
        let mut tail = Deferred::Pending(Box::new(move || Ok(tail())));
        Self::generate_partial(move |k| {
            if k == 0 {
                return Ok(head.take());
            }
            tail.get()?.get_opt(k - 1)
        })
    }

    /// A stream whose definition is computed (fallibly) on first access.
    pub fn deferred(f: impl FnOnce() -> Result<Stream<T>> + 'static) -> Self {
        let mut s = Deferred::Pending(Box::new(f));
        Self::generate_partial(move |k| s.get()?.get_opt(k))
    }

    /// Creates an unbound stream handle and the knot that later binds it.
    /// Reading the handle before binding fails with [`Error::Unbound`].
    pub fn forward() -> (Stream<T>, Knot<T>) {
        let memo = Rc::new(Memo::new(None));
        (
            Stream {
                memo: Rc::clone(&memo),
                offset: 0,
            },
            Knot { memo },
        )
    }

    /// Ties a self-referential definition: `f` receives a handle to the
    /// stream it is defining.
    pub fn fix(f: impl FnOnce(&Stream<T>) -> Stream<T>) -> Self {
        let (s, knot) = Self::forward();
        knot.bind(f(&s));
        s
    }

    /// Cell `k`, or `None` when the sequence ended before `k`.
    pub fn get_opt(&self, k: usize) -> Result<Option<T>> {
        self.memo.force(self.offset + k)
    }

    pub fn get(&self, k: usize) -> Result<T> {
        self.get_opt(k)?.ok_or(Error::Exhausted { index: k })
    }

    /// The first `n` cells; forces nothing beyond index `n - 1`.
    pub fn take(&self, n: usize) -> Result<Vec<T>> {
        (0..n).map(|k| self.get(k)).collect()
    }

    /// The first `n` cells, stopping early if the sequence ends.
    pub fn take_partial(&self, n: usize) -> Result<Vec<T>> {
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            match self.get_opt(k)? {
                Some(v) => out.push(v),
                None => break,
            }
        }
        Ok(out)
    }

    /// Shares cells with `self`; forces nothing.
    pub fn tail(&self) -> Self {
        self.skip(1)
    }

    pub fn skip(&self, n: usize) -> Self {
        Stream {
            memo: Rc::clone(&self.memo),
            offset: self.offset + n,
        }
    }

    pub fn map<U: Clone + 'static>(&self, f: impl Fn(&T) -> U + 'static) -> Stream<U> {
        self.try_map(move |x| Ok(f(x)))
    }

    /// Elementwise map whose errors surface when the cell is forced.
    pub fn try_map<U: Clone + 'static>(
        &self,
        f: impl Fn(&T) -> Result<U> + 'static,
    ) -> Stream<U> {
        let s = self.clone();
        Stream::generate_partial(move |k| s.get_opt(k)?.map(|x| f(&x)).transpose())
    }

    /// Elementwise combination; ends when either input ends.
    pub fn zip_with<U: Clone + 'static, V: Clone + 'static>(
        &self,
        other: &Stream<U>,
        f: impl Fn(&T, &U) -> V + 'static,
    ) -> Stream<V> {
        let (a, b) = (self.clone(), other.clone());
        Stream::generate_partial(move |k| {
            let Some(x) = a.get_opt(k)? else {
                return Ok(None);
            };
            let Some(y) = b.get_opt(k)? else {
                return Ok(None);
            };
            Ok(Some(f(&x, &y)))
        })
    }

    /// `m` copies of `fill`, then `self`.
    pub fn delay(&self, m: usize, fill: T) -> Self {
        if m == 0 {
            return self.clone();
        }
        let s = self.clone();
        Stream::generate_partial(move |k| {
            if k < m {
                Ok(Some(fill.clone()))
            } else {
                s.get_opt(k - m)
            }
        })
    }

    /// `prefix ++ self`.
    pub fn prepend(&self, prefix: Vec<T>) -> Self {
        if prefix.is_empty() {
            return self.clone();
        }
        let s = self.clone();
        Stream::generate_partial(move |k| match prefix.get(k) {
            Some(x) => Ok(Some(x.clone())),
            None => s.get_opt(k - prefix.len()),
        })
    }

    pub fn cell_state(&self, k: usize) -> CellState {
        let idx = self.offset + k;
        let inner = self.memo.inner.borrow();
        if idx < inner.values.len() || inner.ended {
            CellState::Evaluated
        } else if inner.running == Some(idx) {
            CellState::InProgress
        } else {
            CellState::Unevaluated
        }
    }

    /// Number of cells of this view already produced.
    pub fn forced_len(&self) -> usize {
        self.memo
            .inner
            .borrow()
            .values
            .len()
            .saturating_sub(self.offset)
    }

    /// Number of cells, if the sequence is already known to be finite.
    pub fn known_len(&self) -> Option<usize> {
        let inner = self.memo.inner.borrow();
        inner
            .ended
            .then(|| inner.values.len().saturating_sub(self.offset))
    }

    /// True when both handles view the same cells.
    pub fn ptr_eq(&self, other: &Self) -> bool {
        Rc::ptr_eq(&self.memo, &other.memo) && self.offset == other.offset
    }
}

impl<T: Clone + Mul<Output = T> + 'static> Stream<T> {
    /// `c *> s`
    pub fn scale(&self, c: T) -> Self {
        self.map(move |x| c.clone() * x.clone())
    }
}

enum Deferred<T> {
    Pending(Box<dyn FnOnce() -> Result<Stream<T>>>),
    Ready(Stream<T>),
    Taken,
}

impl<T: Clone + 'static> Deferred<T> {
    fn get(&mut self) -> Result<&Stream<T>> {
        if let Deferred::Pending(_) = self {
            let Deferred::Pending(f) = std::mem::replace(self, Deferred::Taken) else {
                unreachable!()
            };
            *self = Deferred::Ready(f()?);
        }
        match self {
            Deferred::Ready(s) => Ok(s),
            // the thunk failed earlier; the owning cell memoized that error
            _ => Err(Error::Unbound { index: 0 }),
        }
    }
}

macro_rules! elementwise_op {
    ($tr:ident, $method:ident) => {
        impl<T> $tr for &Stream<T>
        where
            T: Clone + $tr<Output = T> + 'static,
        {
            type Output = Stream<T>;
            fn $method(self, rhs: Self) -> Stream<T> {
                self.zip_with(rhs, |a, b| a.clone().$method(b.clone()))
            }
        }
    };
}

elementwise_op!(Add, add);
elementwise_op!(Sub, sub);
elementwise_op!(Mul, mul);

impl<T> Neg for &Stream<T>
where
    T: Clone + Neg<Output = T> + 'static,
{
    type Output = Stream<T>;
    fn neg(self) -> Stream<T> {
        self.map(|x| -x.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::Cell;

    fn ones() -> Stream<i64> {
        Stream::fix(|s| {
            let s = s.clone();
            Stream::cons(1, move || s)
        })
    }

    fn integs() -> Stream<i64> {
        let ones = ones();
        Stream::fix(|s| {
            let s = s.clone();
            Stream::cons(1, move || &s + &ones)
        })
    }

    fn fibs() -> Stream<i64> {
        Stream::fix(|fibs| {
            let fibs = fibs.clone();
            Stream::cons(0, move || {
                Stream::fix(|ftail| {
                    let ftail = ftail.clone();
                    Stream::cons(1, move || &fibs + &ftail)
                })
            })
        })
    }

    #[test]
    fn cons_and_self_reference() {
        assert_eq!(ones().take(5).unwrap(), vec![1; 5]);
        assert_eq!(integs().take(4).unwrap(), vec![1, 2, 3, 4]);
        let s = Stream::cons(0, || Stream::cons(1, || Stream::repeat(2)));
        assert_eq!(s.get(0).unwrap(), 0);
        assert_eq!(s.get(1).unwrap(), 1);
    }

    #[test]
    fn tail_thunk_runs_once() {
        let calls = Rc::new(Cell::new(0));
        let c = calls.clone();
        let s = Stream::cons(0, move || {
            c.set(c.get() + 1);
            Stream::repeat(7)
        });
        assert_eq!(calls.get(), 0);
        s.take(10).unwrap();
        s.take(10).unwrap();
        assert_eq!(calls.get(), 1);
    }

    #[test]
    fn map_and_zip() {
        assert_eq!(integs().map(|x| 2 * x).take(3).unwrap(), vec![2, 4, 6]);
        assert_eq!(fibs().map(|x| -x).take(4).unwrap(), vec![0, -1, -1, -2]);
        assert_eq!((&ones() + &ones()).take(3).unwrap(), vec![2, 2, 2]);
        assert_eq!((&integs() - &ones()).take(3).unwrap(), vec![0, 1, 2]);
        let f = fibs();
        assert_eq!(f.map(|x| *x).take(12).unwrap(), f.take(12).unwrap());
    }

    #[test]
    fn fibonacci_prefix() {
        assert_eq!(
            fibs().take(10).unwrap(),
            vec![0, 1, 1, 2, 3, 5, 8, 13, 21, 34]
        );
    }

    #[test]
    fn scale_delay_prepend() {
        assert_eq!(integs().scale(0).take(3).unwrap(), vec![0, 0, 0]);
        assert_eq!(fibs().scale(2).take(5).unwrap(), vec![0, 2, 2, 4, 6]);
        assert_eq!(integs().delay(2, 0).take(5).unwrap(), vec![0, 0, 1, 2, 3]);
        assert_eq!(ones().delay(1, 0).take(3).unwrap(), vec![0, 1, 1]);
        let s = integs();
        assert!(s.delay(0, 0).ptr_eq(&s));
        assert_eq!(ones().prepend(vec![9]).take(3).unwrap(), vec![9, 1, 1]);
        assert!(s.prepend(vec![]).ptr_eq(&s));
    }

    #[test]
    fn take_zero_forces_nothing() {
        let s = integs();
        assert!(s.take(0).unwrap().is_empty());
        assert_eq!(s.forced_len(), 0);
    }

    #[test]
    fn direct_cycle_is_reported() {
        let x: Stream<i64> = Stream::fix(|x| x.map(|v| v + 1));
        assert_eq!(x.take(1), Err(Error::NonProductive { index: 0 }));
        // the failure is memoized
        assert_eq!(x.get(0), Err(Error::NonProductive { index: 0 }));

        let y: Stream<i64> = Stream::fix(|y| Stream::cons(1, { let y = y.clone(); move || y.skip(1) }));
        assert!(matches!(y.take(3), Err(Error::NonProductive { .. })));
    }

    #[test]
    fn unbound_forward_reference() {
        let (s, _knot) = Stream::<i32>::forward();
        assert_eq!(s.get(0), Err(Error::Unbound { index: 0 }));
    }

    #[test]
    fn cell_states() {
        let probe: Rc<RefCell<Vec<CellState>>> = Rc::default();
        let (s, knot) = Stream::<u32>::forward();
        let (p, watch) = (probe.clone(), s.clone());
        knot.bind(Stream::generate(move |k| {
            p.borrow_mut().push(watch.cell_state(k));
            Ok(k as u32)
        }));
        assert_eq!(s.cell_state(0), CellState::Unevaluated);
        s.get(0).unwrap();
        assert_eq!(s.cell_state(0), CellState::Evaluated);
        assert_eq!(probe.borrow()[0], CellState::InProgress);
    }

    #[test]
    fn errors_propagate_at_forcing_time() {
        let s = Stream::generate(|k| {
            if k == 3 {
                Err(Error::DivisionByZero)
            } else {
                Ok(k)
            }
        });
        let m = s.try_map(|x| Ok(x * 10));
        assert_eq!(m.take(3).unwrap(), vec![0, 10, 20]);
        assert_eq!(m.get(3), Err(Error::DivisionByZero));
        assert_eq!(m.get(1).unwrap(), 10);
    }

    #[test]
    fn finite_streams_end() {
        let s = Stream::finite(vec![1, 2]);
        assert_eq!(s.get_opt(2).unwrap(), None);
        assert_eq!(s.get(2), Err(Error::Exhausted { index: 2 }));
        assert_eq!(s.known_len(), Some(2));
        assert_eq!(s.tail().known_len(), Some(1));
        assert_eq!(s.take_partial(10).unwrap(), vec![1, 2]);
    }
}

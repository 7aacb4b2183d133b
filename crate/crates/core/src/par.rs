//! Data-parallel map helpers. With the `parallel` feature (default) the
//! `maybe_*` functions fan out over rayon; without it they degrade to the
//! sequential loops. The `seq_*` variants are always sequential so benches
//! can compare both on identical inputs.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn seq_map<T, U>(items: &[T], f: impl Fn(&T) -> U) -> Vec<U> {
    items.iter().map(f).collect()
}

pub fn seq_try_map<T, U, E>(items: &[T], f: impl Fn(&T) -> Result<U, E>) -> Result<Vec<U>, E> {
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn maybe_par_map<T, U>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U>
where
    T: Sync,
    U: Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn maybe_par_map<T, U>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    seq_map(items, f)
}

#[cfg(feature = "parallel")]
pub fn maybe_par_try_map<T, U, E>(
    items: &[T],
    f: impl Fn(&T) -> Result<U, E> + Sync + Send,
) -> Result<Vec<U>, E>
where
    T: Sync,
    U: Send,
    E: Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn maybe_par_try_map<T, U, E>(
    items: &[T],
    f: impl Fn(&T) -> Result<U, E> + Sync + Send,
) -> Result<Vec<U>, E> {
    seq_try_map(items, f)
}

/// Run two independent closures, concurrently when possible.
#[cfg(feature = "parallel")]
pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    rayon::join(a, b)
}

#[cfg(not(feature = "parallel"))]
pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    (a(), b())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_and_seq_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let f = |x: &u64| x * x + 1;
        assert_eq!(maybe_par_map(&xs, f), seq_map(&xs, f));
    }

    #[test]
    fn try_map_propagates_error() {
        let xs: Vec<i32> = (0..100).collect();
        let f = |x: &i32| if *x == 57 { Err("boom") } else { Ok(*x) };
        assert!(maybe_par_try_map(&xs, f).is_err());
        assert_eq!(maybe_par_try_map(&xs[..50], f).unwrap().len(), 50);
    }

    #[test]
    fn join_returns_both() {
        let (a, b) = join(|| 2 + 2, || "ok");
        assert_eq!((a, b), (4, "ok"));
    }
}

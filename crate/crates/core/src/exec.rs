//! Sequential / data-parallel execution of independent work items.
//!
//! With the `parallel` feature (on by default) `Exec::Parallel` spreads work
//! over the rayon pool. Without it only `Exec::Sequential` exists and rayon
//! is not compiled in. Both paths return results in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Exec {
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
        }
    }

    pub fn map_range<U, F>(self, n: usize, f: F) -> Vec<U>
    where
        U: Send,
        F: Fn(usize) -> U + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
        }
    }

    /// Like [`Exec::map`] but stops at the first error (in input order for
    /// the sequential path; any error for the parallel one).
    pub fn try_map<T, U, E, F>(self, items: &[T], f: F) -> Result<Vec<U>, E>
    where
        T: Sync,
        U: Send,
        E: Send,
        F: Fn(&T) -> Result<U, E> + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
        }
    }

    /// Maximum of `f` over `0..n` (NaN-propagating), 0 for empty input.
    pub fn max_over<F>(self, n: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        let fold = |acc: f64, v: f64| if v.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(v) };
        match self {
            Exec::Sequential => (0..n).map(f).fold(0.0, fold),
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).reduce(|| 0.0, fold),
        }
    }
}

/// `n` uniformly spaced points from 0 to `t_max` inclusive.
pub fn uniform_times(t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_agree() {
        let items: Vec<f64> = (0..1000).map(|k| k as f64 * 0.01).collect();
        let seq = Exec::Sequential.map(&items, |x| x.sin());
        let par = Exec::default().map(&items, |x| x.sin());
        assert_eq!(seq, par);
        assert_eq!(Exec::Sequential.max_over(10, |k| k as f64), 9.0);
        assert_eq!(Exec::default().max_over(10, |k| k as f64), 9.0);
        assert!(Exec::default().max_over(3, |k| if k == 1 { f64::NAN } else { 0.0 }).is_nan());
    }

    #[test]
    fn try_map_reports_errors() {
        let r: Result<Vec<i32>, &str> = Exec::default().try_map(&[1, 2, 3], |&v| if v == 2 { Err("two") } else { Ok(v) });
        assert_eq!(r, Err("two"));
    }

    #[test]
    fn uniform_times_endpoints() {
        let t = uniform_times(2.0, 5);
        assert_eq!(t, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(uniform_times(1.0, 1), vec![0.0]);
    }
}

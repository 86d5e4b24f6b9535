//! Trial execution. Trial `i` of a run with seed `s` gets seed `s + i`; each
//! trial owns its data and results are collected in trial order.

/// How trials are spread over threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    /// Falls back to sequential without the `parallel` feature.
    Parallel,
}

impl Mode {
    pub fn default_mode() -> Self {
        if cfg!(feature = "parallel") {
            Mode::Parallel
        } else {
            Mode::Sequential
        }
    }
}

/// Thread cap from `MPQS_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("MPQS_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

#[cfg(feature = "parallel")]
fn pool() -> &'static rayon::ThreadPool {
    use std::sync::OnceLock;
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = thread_cap() {
            b = b.num_threads(n);
        }
        b.build().expect("thread pool")
    })
}

/// Runs `f(trial, seed + trial)` for every trial.
pub fn run_trials<T, F>(trials: usize, seed: u64, mode: Mode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, u64) -> T + Sync + Send,
{
    let seed_of = |i: usize| seed.wrapping_add(i as u64);
    match mode {
        #[cfg(feature = "parallel")]
        Mode::Parallel => {
            use rayon::prelude::*;
            pool().install(|| {
                (0..trials)
                    .into_par_iter()
                    .map(|i| f(i, seed_of(i)))
                    .collect()
            })
        }
        _ => (0..trials).map(|i| f(i, seed_of(i))).collect(),
    }
}

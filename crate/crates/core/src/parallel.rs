// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Runtime choice between sequential and thread-parallel trial execution.
//!
//! Work items are always collected in index order and reduced sequentially afterwards, so
//! results do not depend on the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Environment variable that caps the number of worker threads.
pub const THREADS_ENV: &str = "SABRE_ROUTE_THREADS";

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// Up to this many threads; 0 uses the global pool.
    Threads(usize),
    /// Read [`THREADS_ENV`] when the work runs.
    #[default]
    FromEnv,
}

impl Parallelism {
    /// Resolve [`Parallelism::FromEnv`]: unset or unparsable means the global pool, 1 means
    /// sequential.
    pub fn resolve(self) -> Parallelism {
        match self {
            Parallelism::FromEnv => match std::env::var(THREADS_ENV)
                .ok()
                .and_then(|v| v.trim().parse().ok())
            {
                Some(1) => Parallelism::Sequential,
                Some(n) => Parallelism::Threads(n),
                None => Parallelism::Threads(0),
            },
            other => other,
        }
    }
}

/// `(0..n).map(f)` with the requested parallelism; the output is in index order.
pub fn map_indexed<T, F>(n: usize, parallelism: Parallelism, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match parallelism.resolve() {
        Parallelism::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Threads(0) => (0..n).into_par_iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Threads(threads) => {
            match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                Ok(pool) => pool.install(|| (0..n).into_par_iter().map(&f).collect()),
                Err(_) => (0..n).map(f).collect(),
            }
        }
        _ => (0..n).map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let expected: Vec<usize> = (0..100).map(|i| i * i).collect();
        for p in [
            Parallelism::Sequential,
            Parallelism::Threads(0),
            Parallelism::Threads(3),
        ] {
            assert_eq!(map_indexed(100, p, |i| i * i), expected);
        }
    }
}

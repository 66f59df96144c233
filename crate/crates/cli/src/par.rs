//! Deterministic fan-out over scoped threads.

use std::num::NonZeroUsize;
use std::ops::Range;

/// Evaluates `f(0), …, f(count-1)` on up to `threads` threads. Results come
/// back in index order, so output never depends on the thread count.
pub fn map_indices<T, E, F>(count: usize, threads: NonZeroUsize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync,
{
    let threads = threads.get().min(count.max(1));
    if threads == 1 {
        return (0..count).map(f).collect();
    }
    let f = &f;
    let mut slots: Vec<Option<Result<T, E>>> = (0..count).map(|_| None).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|k| s.spawn(move || (k..count).step_by(threads).map(|i| (i, f(i))).collect::<Vec<_>>()))
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots.into_iter().map(|r| r.expect("every index visited")).collect()
}

/// Splits `0..total` into at most `parts` contiguous, nearly equal ranges.
pub fn split_range(total: u64, parts: NonZeroUsize) -> Vec<Range<u64>> {
    let parts = (parts.get() as u64).min(total.max(1));
    (0..parts)
        .map(|k| total * k / parts..total * (k + 1) / parts)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nz(k: usize) -> NonZeroUsize {
        NonZeroUsize::new(k).unwrap()
    }

    #[test]
    fn order_is_kept() {
        for t in 1..6 {
            let v: Result<Vec<usize>, ()> = map_indices(11, nz(t), |i| Ok(i * i));
            assert_eq!(v.unwrap(), (0..11).map(|i| i * i).collect::<Vec<_>>());
        }
        let e: Result<Vec<usize>, usize> = map_indices(5, nz(3), |i| if i == 3 { Err(i) } else { Ok(i) });
        assert_eq!(e, Err(3));
    }

    #[test]
    fn ranges_cover() {
        for total in [0u64, 1, 7, 100] {
            for p in 1..5 {
                let r = split_range(total, nz(p));
                assert_eq!(r.first().unwrap().start, 0);
                assert_eq!(r.last().unwrap().end, total);
                assert!(r.windows(2).all(|w| w[0].end == w[1].start));
            }
        }
    }
}

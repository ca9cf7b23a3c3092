//! Deterministic work sharding. Index ranges are contiguous, partial
//! results are merged in shard order, so output is identical for any
//! worker count.

use std::ops::Range;

pub fn ranges(total: u64, jobs: usize) -> Vec<Range<u64>> {
    let jobs = jobs.max(1).min(total.max(1) as usize) as u64;
    let base = total / jobs;
    let extra = total % jobs;
    let mut start = 0;
    (0..jobs)
        .map(|i| {
            let len = base + u64::from(i < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

/// Runs `work` on each index range, one thread per range, and returns the
/// partial results in shard order.
pub fn map_ranges<R, F>(total: u64, jobs: usize, work: F) -> Vec<R>
where
    R: Send,
    F: Fn(Range<u64>) -> R + Sync,
{
    let ranges = ranges(total, jobs);
    if ranges.len() <= 1 {
        return ranges.into_iter().map(work).collect();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| scope.spawn(|| work(r)))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_partition() {
        for total in [0u64, 1, 7, 100] {
            for jobs in [1usize, 2, 3, 8] {
                let rs = ranges(total, jobs);
                let mut next = 0;
                for r in &rs {
                    assert_eq!(r.start, next);
                    next = r.end;
                }
                assert_eq!(next, total);
            }
        }
    }

    #[test]
    fn map_matches_sequential() {
        let sums: Vec<u64> = map_ranges(1000, 4, |r| r.sum());
        assert_eq!(sums.iter().sum::<u64>(), (0u64..1000).sum::<u64>());
    }
}

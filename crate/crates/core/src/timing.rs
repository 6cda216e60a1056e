//! CPU-time measurement for the timing report columns.
//!
//! Cells run on worker threads, so the clock is the calling thread's CPU
//! clock: time spent computing, not waiting. Falls back to wall time on
//! platforms without per-thread clocks.

use std::time::Duration;

#[cfg(unix)]
fn now() -> Duration {
    let mut ts = libc::timespec {
        tv_sec: 0,
        tv_nsec: 0,
    };
    // Always succeeds for CLOCK_THREAD_CPUTIME_ID on the calling thread.
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_THREAD_CPUTIME_ID, &mut ts) };
    assert_eq!(rc, 0, "clock_gettime failed");
    Duration::new(ts.tv_sec as u64, ts.tv_nsec as u32)
}

#[cfg(not(unix))]
fn now() -> Duration {
    use std::sync::OnceLock;
    use std::time::Instant;
    static EPOCH: OnceLock<Instant> = OnceLock::new();
    EPOCH.get_or_init(Instant::now).elapsed()
}

/// Measures CPU time spent on the current thread between `start` and
/// `elapsed_ms`. Must be read on the thread that started it.
pub struct CpuTimer {
    start: Duration,
}

impl CpuTimer {
    pub fn start() -> Self {
        Self { start: now() }
    }

    pub fn elapsed_ms(&self) -> f64 {
        now().saturating_sub(self.start).as_secs_f64() * 1e3
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elapsed_is_monotone_and_nonnegative() {
        let timer = CpuTimer::start();
        let a = timer.elapsed_ms();
        let b = timer.elapsed_ms();
        assert!(a >= 0.0);
        assert!(b >= a);
    }

    #[test]
    fn busy_work_registers_cpu_time() {
        let timer = CpuTimer::start();
        let mut acc = 0u64;
        for i in 0..5_000_000u64 {
            acc = acc.wrapping_mul(6364136223846793005).wrapping_add(i);
        }
        assert!(acc != 42); // keep the loop alive
        assert!(timer.elapsed_ms() > 0.0);
    }

    #[cfg(unix)]
    #[test]
    fn sleeping_consumes_little_cpu() {
        let timer = CpuTimer::start();
        std::thread::sleep(Duration::from_millis(60));
        assert!(timer.elapsed_ms() < 50.0, "sleep was billed as CPU time");
    }
}

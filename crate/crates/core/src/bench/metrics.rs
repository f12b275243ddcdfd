//! Process-level metric sampling: CPU time, peak resident memory, and a
//! machine descriptor, read from the host OS accounting facilities.

use std::time::Duration;

/// User + system CPU time consumed by this process so far.
pub fn cpu_time() -> Duration {
    unsafe {
        let mut usage: libc::rusage = std::mem::zeroed();
        if libc::getrusage(libc::RUSAGE_SELF, &mut usage) != 0 {
            return Duration::ZERO;
        }
        timeval_duration(usage.ru_utime) + timeval_duration(usage.ru_stime)
    }
}

fn timeval_duration(tv: libc::timeval) -> Duration {
    Duration::new(tv.tv_sec.max(0) as u64, (tv.tv_usec.max(0) as u32) * 1000)
}

/// High-water mark of resident memory, in bytes. Prefers VmHWM from
/// /proc/self/status (resettable between runs); falls back to ru_maxrss.
pub fn peak_rss_bytes() -> u64 {
    if let Some(hwm) = proc_status_kb("VmHWM:") {
        return hwm * 1024;
    }
    unsafe {
        let mut usage: libc::rusage = std::mem::zeroed();
        if libc::getrusage(libc::RUSAGE_SELF, &mut usage) != 0 {
            return 0;
        }
        // ru_maxrss is kilobytes on Linux.
        (usage.ru_maxrss.max(0) as u64) * 1024
    }
}

/// Resets the peak-RSS watermark so per-run peaks are independent. Returns
/// whether the reset took effect; when it does not, peaks are cumulative
/// high-water marks.
pub fn try_reset_peak_rss() -> bool {
    std::fs::write("/proc/self/clear_refs", b"5").is_ok()
}

fn proc_status_kb(key: &str) -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    for line in status.lines() {
        if let Some(rest) = line.strip_prefix(key) {
            let number: String = rest.chars().filter(|c| c.is_ascii_digit()).collect();
            return number.parse().ok();
        }
    }
    None
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct MachineDescriptor {
    pub cpu_model: String,
    pub cores: u32,
    pub memory_bytes: u64,
}

pub fn machine_descriptor() -> MachineDescriptor {
    let cpu_model = std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|info| {
            info.lines()
                .find(|l| l.starts_with("model name"))
                .and_then(|l| l.split(':').nth(1))
                .map(|s| s.trim().to_owned())
        })
        .unwrap_or_else(|| "unknown".to_owned());
    let cores = std::thread::available_parallelism()
        .map(|n| n.get() as u32)
        .unwrap_or(1);
    let memory_bytes = std::fs::read_to_string("/proc/meminfo")
        .ok()
        .and_then(|info| {
            info.lines()
                .find(|l| l.starts_with("MemTotal:"))
                .map(|l| l.chars().filter(|c| c.is_ascii_digit()).collect::<String>())
                .and_then(|kb| kb.parse::<u64>().ok())
        })
        .map(|kb| kb * 1024)
        .unwrap_or(0);
    MachineDescriptor {
        cpu_model,
        cores,
        memory_bytes,
    }
}

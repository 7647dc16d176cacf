//! Destabilizer scan split across worker threads by leading coordinate.

use std::thread;

use anyhow::Result;
use k3twist_core::stability::{Candidate, ChargeParams, Scanner};
use k3twist_core::{MukaiVector, QuadExt};

/// Same output as the sequential scan for every `jobs >= 1`.
pub fn parallel_scan(
    p: &ChargeParams,
    v: &MukaiVector,
    m: &QuadExt,
    bound: u32,
    jobs: usize,
) -> Result<Vec<Candidate>> {
    let scanner = Scanner::new(p, v, m, bound)?;
    let leads: Vec<i64> = scanner.leads().collect();
    let jobs = jobs.clamp(1, leads.len());
    let scanner = &scanner;
    let leads = &leads;
    let parts = thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                s.spawn(move || -> k3twist_core::Result<Vec<Candidate>> {
                    let mut out = Vec::new();
                    for lead in leads.iter().skip(w).step_by(jobs) {
                        out.extend(scanner.scan_slice(*lead)?);
                    }
                    Ok(out)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan worker panicked"))
            .collect::<Vec<_>>()
    });
    let mut all = Vec::new();
    for part in parts {
        all.extend(part?);
    }
    all.sort_by(|a, b| a.coords.cmp(&b.coords));
    Ok(all)
}

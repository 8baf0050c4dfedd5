use serde::{Deserialize, Serialize};

use crate::terms::TermOrder;

use super::CoalescingError;

/// One execution of a term inside a sub-step: evolve under `H_term` for
/// `multiplier · δt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Execution {
    pub term: usize,
    pub multiplier: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoalescingSchedule {
    pub base_step: f64,
    pub periods: Vec<u32>,
    /// `K = max n_α`.
    pub cycle_length: u32,
    /// `K` sub-steps, each listing its executions in product order.
    pub sub_steps: Vec<Vec<Execution>>,
}

impl CoalescingSchedule {
    /// Total time each term is evolved for over one cycle.
    pub fn accumulated_strength(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.periods.len()];
        for e in self.sub_steps.iter().flatten() {
            acc[e.term] += e.multiplier as f64 * self.base_step;
        }
        acc
    }

    /// Simulated time covered by one cycle, `K δt`.
    pub fn cycle_time(&self) -> f64 {
        self.cycle_length as f64 * self.base_step
    }
}

/// First-order coalesced schedule.
///
/// Sub-step `s` (counting from 1) runs every term with `(s − 1) mod n = 0`
/// at strength `n δt`, following `order`.
pub fn build_schedule(
    periods: &[u32],
    base_step: f64,
    order: &TermOrder,
) -> Result<CoalescingSchedule, CoalescingError> {
    if order.len() != periods.len() {
        return Err(CoalescingError::LengthMismatch {
            terms: order.len(),
            periods: periods.len(),
        });
    }
    if let Some((term, &period)) = periods
        .iter()
        .enumerate()
        .find(|(_, p)| !p.is_power_of_two())
    {
        return Err(CoalescingError::NonPowerOfTwoPeriod { term, period });
    }
    let cycle_length = periods.iter().copied().max().unwrap_or(1);
    let sub_steps = (0..cycle_length)
        .map(|s| {
            order
                .as_slice()
                .iter()
                .filter(|&&t| s % periods[t] == 0)
                .map(|&t| Execution {
                    term: t,
                    multiplier: periods[t],
                })
                .collect()
        })
        .collect();
    Ok(CoalescingSchedule {
        base_step,
        periods: periods.to_vec(),
        cycle_length,
        sub_steps,
    })
}

/// Average term executions per sub-step, `Σ 1/n_α`.
pub fn work_per_cycle(schedule: &CoalescingSchedule) -> f64 {
    schedule.periods.iter().map(|&n| 1.0 / n as f64).sum()
}

//! Multi-resolution Trotter schedules: small four-index terms are applied
//! only every `n`-th step, at `n` times the strength.

mod export;
mod importance;
mod periods;
mod schedule;

use thiserror::Error;

pub use export::{
    deserialize_schedule, importance_histogram, serialize_schedule, write_histogram_csv,
    HistogramAxis, HistogramRow, SCHEDULE_FORMAT_NAME, SCHEDULE_FORMAT_VERSION,
};
pub use importance::{
    build_importance_table, default_occupied, delta_denominator, hf_annihilates, importance,
    orbital_energies, pauli_strengths, representative_magnitude, Importance, ImportanceEntry,
    ImportanceTable, DEGENERATE_DENOMINATOR, STRENGTH_DIRECTIONS,
};
pub use periods::{
    assign_periods, PeriodAssignment, Region, FRONT_PORCH_PERIOD, LOWER_SIGMAS, TAIL_PERIODS,
    UPPER_SIGMAS,
};
pub use schedule::{build_schedule, work_per_cycle, CoalescingSchedule, Execution};

#[derive(Debug, Error)]
pub enum CoalescingError {
    #[error("term {term} has period {period}, which is not a power of two")]
    NonPowerOfTwoPeriod { term: usize, period: u32 },
    #[error("{periods} periods given for {terms} terms")]
    LengthMismatch { terms: usize, periods: usize },
    #[error("schedule format: {0}")]
    Format(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl PartialEq for CoalescingError {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (
                Self::NonPowerOfTwoPeriod { term: a, period: p },
                Self::NonPowerOfTwoPeriod { term: b, period: q },
            ) => a == b && p == q,
            (
                Self::LengthMismatch {
                    terms: a,
                    periods: p,
                },
                Self::LengthMismatch {
                    terms: b,
                    periods: q,
                },
            ) => a == b && p == q,
            (Self::Format(a), Self::Format(b)) => a == b,
            _ => false,
        }
    }
}

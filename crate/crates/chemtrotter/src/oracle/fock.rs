//! Occupation-number bases and Jordan–Wigner action of ladder monomials.
//!
//! Bit `p` of a basis state is the occupation of spin orbital `p`. The
//! Jordan–Wigner string of mode `p` is the parity of the occupied modes below
//! `p`, so `c†_p |b⟩ = (-1)^{popcount(b & ((1<<p)-1))} |b | 1<<p⟩`.

use crate::hamiltonian::Monomial;

use super::OracleError;

/// Largest supported mode count.
pub const MAX_MODES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    n_modes: usize,
    particles: Option<usize>,
    states: Vec<u64>,
    binom: Vec<Vec<usize>>,
}

impl FockBasis {
    /// All `2^n` occupation states, ordered by their bit pattern.
    pub fn full(n_modes: usize) -> Result<Self, OracleError> {
        check_cap(n_modes)?;
        Ok(Self {
            n_modes,
            particles: None,
            states: (0..1u64 << n_modes).collect(),
            binom: binomials(n_modes),
        })
    }

    /// States with exactly `particles` occupied modes, ascending by bit pattern.
    pub fn sector(n_modes: usize, particles: usize) -> Result<Self, OracleError> {
        check_cap(n_modes)?;
        if particles > n_modes {
            return Err(OracleError::InvalidSector { particles, n_modes });
        }
        let states = (0..1u64 << n_modes)
            .filter(|b| b.count_ones() as usize == particles)
            .collect();
        Ok(Self {
            n_modes,
            particles: Some(particles),
            states,
            binom: binomials(n_modes),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn particles(&self) -> Option<usize> {
        self.particles
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn state(&self, i: usize) -> u64 {
        self.states[i]
    }

    /// Position of `state` in the basis, if present.
    pub fn index_of(&self, state: u64) -> Option<usize> {
        if state >> self.n_modes != 0 {
            return None;
        }
        match self.particles {
            None => Some(state as usize),
            Some(k) if state.count_ones() as usize == k => {
                // combinatorial number system: Σ_i C(b_i, i+1) over set bits b_0 < b_1 < …
                let mut rank = 0;
                let mut rest = state;
                let mut i = 0;
                while rest != 0 {
                    let b = rest.trailing_zeros() as usize;
                    rank += self.binom[b][i + 1];
                    rest &= rest - 1;
                    i += 1;
                }
                Some(rank)
            }
            Some(_) => None,
        }
    }
}

fn check_cap(n_modes: usize) -> Result<(), OracleError> {
    if n_modes > MAX_MODES {
        Err(OracleError::DimensionCap {
            n_modes,
            max: MAX_MODES,
        })
    } else {
        Ok(())
    }
}

fn binomials(n: usize) -> Vec<Vec<usize>> {
    let mut c = vec![vec![0usize; n + 2]; n + 1];
    for row in 0..=n {
        c[row][0] = 1;
        for k in 1..=row {
            c[row][k] = c[row - 1][k - 1] + if k < row { c[row - 1][k] } else { 0 };
        }
    }
    c
}

/// Parity sign of the occupied modes strictly below `mode`.
#[inline]
pub fn jw_sign(state: u64, mode: usize) -> f64 {
    if (state & ((1u64 << mode) - 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Applies the ladder product of `m` (coefficient excluded) to a basis state.
///
/// Returns the image state and the fermionic sign, or `None` if the state is
/// annihilated.
pub fn apply_ladder(m: &Monomial, state: u64) -> Option<(u64, f64)> {
    let mut b = state;
    let mut sign = 1.0;
    for &a in m.annihilators.iter().rev() {
        if b >> a & 1 == 0 {
            return None;
        }
        sign *= jw_sign(b, a);
        b &= !(1u64 << a);
    }
    for &c in m.creators.iter().rev() {
        if b >> c & 1 == 1 {
            return None;
        }
        sign *= jw_sign(b, c);
        b |= 1u64 << c;
    }
    Some((b, sign))
}

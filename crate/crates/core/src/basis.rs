//! Basis bookkeeping for the two models.
//!
//! Two coupled cavities with `N` photons live in the fixed-`N` sector spanned by
//! `|N-i, i>` for `i = 0..=N`; index `0` is `|N,0>` (all photons on the left).
//!
//! The cavity-qubit space is ordered block by block. Index `0` holds `|down,1>`,
//! which has no partner inside the truncated space, and block `n` (`1..=N`)
//! occupies indices `2n-1` (`|up,n>`) and `2n` (`|down,n+1>`). The state
//! `|down,N+1>` closes the last block, so the dimension is `2N+1`.

use std::fmt;

use crate::error::{Error, Result};

/// Qubit level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    Down,
    Up,
}

/// Label of a single basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    /// `|left, N-left>` in the fixed-`N` sector.
    TwoCavity { left: usize, right: usize },
    /// `|sigma, n>` with `n` photons in the cavity.
    CavityQubit { sigma: Qubit, n: usize },
    /// Plain index for bases without physical labels.
    Index(usize),
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BasisLabel::TwoCavity { left, right } => write!(f, "|{left},{right}>"),
            BasisLabel::CavityQubit { sigma: Qubit::Up, n } => write!(f, "|up,{n}>"),
            BasisLabel::CavityQubit { sigma: Qubit::Down, n } => write!(f, "|down,{n}>"),
            BasisLabel::Index(i) => write!(f, "|{i}>"),
        }
    }
}

/// Family of a basis together with its size parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    TwoCavity { n_photons: usize },
    CavityQubit { n_max: usize },
    Generic { dim: usize },
}

impl Basis {
    pub fn dim(&self) -> usize {
        match *self {
            Basis::TwoCavity { n_photons } => n_photons + 1,
            Basis::CavityQubit { n_max } => 2 * n_max + 1,
            Basis::Generic { dim } => dim,
        }
    }

    pub fn label(&self, index: usize) -> Result<BasisLabel> {
        let dim = self.dim();
        if index >= dim {
            return Err(Error::OutOfRange { index, max: dim.saturating_sub(1) });
        }
        Ok(match *self {
            Basis::TwoCavity { n_photons } => BasisLabel::TwoCavity {
                left: n_photons - index,
                right: index,
            },
            Basis::CavityQubit { .. } => {
                if index == 0 {
                    BasisLabel::CavityQubit { sigma: Qubit::Down, n: 1 }
                } else if index % 2 == 1 {
                    BasisLabel::CavityQubit { sigma: Qubit::Up, n: index.div_ceil(2) }
                } else {
                    BasisLabel::CavityQubit { sigma: Qubit::Down, n: index / 2 + 1 }
                }
            }
            Basis::Generic { .. } => BasisLabel::Index(index),
        })
    }

    pub fn index_of(&self, label: BasisLabel) -> Option<usize> {
        match (*self, label) {
            (Basis::TwoCavity { n_photons }, BasisLabel::TwoCavity { left, right }) => {
                (left + right == n_photons).then_some(right)
            }
            (Basis::CavityQubit { n_max }, BasisLabel::CavityQubit { sigma, n }) => match sigma {
                Qubit::Up if (1..=n_max).contains(&n) => Some(2 * n - 1),
                Qubit::Down if n == 1 => Some(0),
                Qubit::Down if (2..=n_max + 1).contains(&n) => Some(2 * (n - 1)),
                _ => None,
            },
            (Basis::Generic { dim }, BasisLabel::Index(i)) => (i < dim).then_some(i),
            _ => None,
        }
    }

    pub fn labels(&self) -> Vec<BasisLabel> {
        (0..self.dim()).map(|i| self.label(i).expect("index in range")).collect()
    }

    /// Fails unless `self` and `other` are the same basis.
    pub fn ensure_same(&self, other: &Basis) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        if self != other {
            return Err(Error::BasisMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }
}

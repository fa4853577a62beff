//! Electroweak extensions: W/Z/A labelings with the J factor, and the
//! scalar-boson Corolla polynomial built from a coupling-rule table.

mod gauge;
mod labeling;
mod polynomial;
mod rules;
mod scalar;

use std::fmt;

use thiserror::Error;

use crate::corolla::CorollaError;
use crate::expr::ExprError;
use crate::graph::GraphError;

pub use gauge::{gauge_boson_labelings, j_factor, j_factor_with_symmetry, GaugeLabeling};
pub use labeling::{
    coupling_product, enumerate_labelings, labeling_family, ExternalPolicy, ParticleLabeling, WeightedLabeling,
};
pub use polynomial::{apply_ew, corolla_ew, corolla_ew_summand, mass_exponent};
pub use rules::{parse_rules, CouplingRuleTable};
pub use scalar::{is_admissible_shrink_set, scalar_sets, shrink_candidates, ScalarSets};

/// Particle types carried by electroweak labelings. Charged types are
/// unoriented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Particle {
    W,
    Z,
    A,
    Higgs,
    Phi,
    PhiZ,
}

impl Particle {
    pub const GAUGE: [Particle; 3] = [Particle::W, Particle::Z, Particle::A];
    pub const SCALAR: [Particle; 3] = [Particle::Higgs, Particle::Phi, Particle::PhiZ];

    pub fn name(self) -> &'static str {
        match self {
            Particle::W => "W",
            Particle::Z => "Z",
            Particle::A => "A",
            Particle::Higgs => "h",
            Particle::Phi => "phi",
            Particle::PhiZ => "phiZ",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::GAUGE.into_iter().chain(Self::SCALAR).find(|p| p.name() == s)
    }

    pub fn is_scalar(self) -> bool {
        Self::SCALAR.contains(&self)
    }
}

impl fmt::Display for Particle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ElectroweakError {
    #[error("line {line}, column {column}: {message}")]
    Rules { line: usize, column: usize, message: String },
    #[error("no {valence}-valent rule for {labels}")]
    MissingRule { valence: usize, labels: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Corolla(#[from] CorollaError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

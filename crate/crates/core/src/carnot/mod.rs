//! Carnot algebras, coordinate realizations and sub-Riemannian systems.
//!
//! A system is stored as `2H` together with the two fiber-linear forms whose
//! squares sum to it. Realizations carry the left-invariant `omega_i` that the
//! source formulas provide; missing ones can be derived from brackets of the
//! first two during [`verify_realization`].

mod algebra;
pub mod catalog;
mod file;
mod realization;

pub use algebra::{AlgebraVector, Bracket, CarnotAlgebra, CheckOutcome, ValidationReport};
pub use catalog::{lookup, CatalogParams, CATALOG_NAMES};
pub use file::{parse_algebra_file, AlgebraFile};
pub use realization::{verify_realization, CoordinateRealization, RealizationReport};

use thiserror::Error;

use crate::exactpoly::{ParseError, PhasePolynomial, PolyError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CarnotError {
    #[error("malformed algebra: {0}")]
    Malformed(String),
    #[error("unknown system {0:?}")]
    UnknownSystem(String),
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("realization has no consistent sign; failing pair (omega_{0}, omega_{1})")]
    Transcription(usize, usize),
    #[error("{{omega_{0}, theta_{1}}} does not vanish")]
    ThetaRelation(usize, usize),
    #[error("omega_{0} is not fiber-linear with value p_{0} at x = 0")]
    OriginValue(usize),
    #[error("recorded sign {recorded} disagrees with the verified sign {found}")]
    SignMismatch { recorded: i32, found: i32 },
    #[error("no realization available for {0}")]
    NoRealization(String),
    #[error("line {line}: {msg}")]
    File { line: usize, msg: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A left-invariant sub-Riemannian structure with its Hamiltonian.
#[derive(Debug, Clone)]
pub struct SRSystem {
    pub name: String,
    pub algebra: CarnotAlgebra,
    /// `2H`, homogeneous of degree two in the momenta.
    pub hamiltonian2: PhasePolynomial,
    /// Fiber-linear `(u, v)` with `2H = u^2 + v^2`, when known.
    pub frame: Option<(PhasePolynomial, PhasePolynomial)>,
    pub realization: Option<CoordinateRealization>,
}

impl SRSystem {
    pub fn dim(&self) -> usize {
        self.algebra.dim
    }

    /// True when `H` involves no base coordinate other than `x_1, x_2`, so
    /// that `p_3..p_D` are Noether integrals.
    pub fn obstruct_ready(&self) -> bool {
        (3..=self.hamiltonian2.num_base_vars()).all(|i| !self.hamiltonian2.depends_on(Var::X(i)))
    }

    /// Indices of the Noether momenta `p_3..p_D`.
    pub fn noether_momenta(&self) -> std::ops::RangeInclusive<usize> {
        3..=self.dim()
    }

    /// `H` itself (half of the stored `2H`).
    pub fn hamiltonian(&self) -> PhasePolynomial {
        self.hamiltonian2.scale(&crate::exactpoly::rat(1, 2))
    }

    /// The constant polynomial / variable helpers in this system's ring.
    pub fn var(&self, v: Var) -> PhasePolynomial {
        PhasePolynomial::var(
            self.hamiltonian2.num_base_vars(),
            self.hamiltonian2.num_momenta(),
            v,
        )
        .expect("variable within the system's ring")
    }

    pub fn parse(&self, expr: &str) -> Result<PhasePolynomial, ParseError> {
        crate::exactpoly::parse_polynomial(
            expr,
            self.hamiltonian2.num_base_vars(),
            self.hamiltonian2.num_momenta(),
        )
    }
}

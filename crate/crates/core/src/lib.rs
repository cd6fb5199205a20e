//! Random normed modules over atomic probability spaces.
//!
//! Every object lives on a finite [`AtomicSpace`] (or, for the countable
//! concatenation machinery, a lazily indexed dyadic space) and every
//! statement that holds "almost surely" is decided atom by atom.

pub mod axioms;
pub mod concatenation;
pub mod error;
pub mod geometry;
pub mod helly_solver;
pub mod l0_algebra;
pub mod linalg;
pub mod random_conjugate;
pub mod rn_module;
pub mod sampling;
pub mod separation;
pub mod stratification;
pub mod weak_star;

pub use axioms::{run_axiom_suites, AxiomReport, LawResult};
pub use concatenation::{
    cc_norm, concatenate, concatenate_dyadic, counterexample_check, truncate_to_tolerance, ConcatResult, CounterexampleReport, DyadicSpace,
    FiniteSupportElement,
};
pub use error::{Error, Result};
pub use helly_solver::{check_condition, solve, sup_ratio_oracle, Certificate, HellyInstance, HellyVerdict};
pub use l0_algebra::{indicator, sup, AtomSet, AtomicSpace, Field, L0Scalar};
pub use num_complex::Complex64;
pub use random_conjugate::{embed, evaluate, functional_norm, BidualTarget, Embedded, RandomFunctional};
pub use rn_module::RNElement;
pub use separation::{gauge, hereditary_disjoint_stratification, separate, ConvexBody, Separation, Shape};
pub use stratification::{express_in_basis, quasi_free_stratification, Stratification};
pub use weak_star::{excluding_neighborhood, goldstine_witness, in_eps_lambda_nbhd, in_local_nbhd, EpsLambdaNbhd, Exclusion, LocalNbhd};

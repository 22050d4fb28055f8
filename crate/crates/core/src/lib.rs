//! Exact and numerical machinery for the cyclic-cover surfaces M_{k,ℓ}: their
//! singularity data and symmetry group, hyperelliptic Rauzy diagrams, the
//! monodromy matrices L_p with their invariant Hermitian form, density
//! certificates, and Monte-Carlo Lyapunov spectra.

pub mod error;
pub mod number;

pub mod density;
pub mod generators;
pub mod group;
pub mod lyapunov;
pub mod rauzy;
pub mod report;
pub mod surface;

pub use error::{KzError, Result};
pub use number::{AlphaParam, CyclotomicNumber, ExactMatrix, RootSum};

pub use density::{DensityVerdict, GroupEnumeration, GroupOrder, LieClosure, VerdictCase};
pub use generators::{FormDiagonalization, GeneratorSet, HermitianGram, Signature};
pub use group::{CharacterTable, HomologyDecomposition, SymmetryGroup};
pub use lyapunov::{SimConfig, SpectrumReport, SpectrumVerdict};
pub use rauzy::{ArrowType, PermutationPair, RauzyDiagram};
pub use report::{CheckRecord, CheckStatus, ExportFormat, Grid, VerificationReport};
pub use surface::{HodgeGram, SingularityProfile, SurfaceParams};

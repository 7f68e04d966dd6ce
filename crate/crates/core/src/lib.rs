//! Exact symbolic Chern-class calculus over `Q`.
//!
//! Polynomials live in [`symfun`]; bundles and their Chern classes in
//! [`chern_ring`] and [`charclass`]; projective-bundle towers and
//! pushforwards in [`pushforward`]; determinants of cohomology and Deligne
//! pairing degrees in [`dcoh`]; Picard-category invariants in [`picard`].

pub mod charclass;
pub mod chern_ring;
pub mod dcoh;
pub mod error;
pub mod picard;
pub mod pushforward;
pub mod symfun;

pub use charclass::{CharClassSpec, ClassKind, RootSource, VirtualBundle, VirtualRoots};
pub use chern_ring::{BundleDecl, ChernSeries, IdentityCheck, SegreConvention, Setup};
pub use dcoh::{FamilyDescriptor, MultidegreeLineBundle};
pub use error::{Error, Result};
pub use picard::{FGAbelianGroup, GroupoidSkeleton, MonoidPresentation, PicardInvariants};
pub use pushforward::{Tower, TowerDescriptor};
pub use symfun::{GradedPoly, Monomial, PowerSeries1, Rational, Var};

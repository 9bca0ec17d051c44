//! Set descriptions, metric projections and cone calculus.

pub mod closed;
pub mod cone;
pub mod region;
pub mod simplex;

pub use closed::ClosedConvexSet;
pub use cone::{
    is_solid_dual, krein_rutman_truncation_demo, moreau_split, nnls, ConeForm, FinCone,
    TruncationRow,
};
pub use region::{gram_schmidt, AffineFlat, Boundary, Location, Region};

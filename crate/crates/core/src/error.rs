use crate::euclid::Point;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0} (only 2 and 3 are supported)")]
    UnsupportedDimension(usize),

    #[error("point cloud must not be empty")]
    EmptyCloud,

    #[error("non-finite coordinate in point {index}")]
    NonFinite { index: usize },

    #[error("points {first} and {second} coincide within the duplicate tolerance")]
    DuplicatePoint { first: usize, second: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("the open ball of radius {radius} around {center:?} contains no point of the set")]
    EmptyIntersection { center: Point, radius: f64 },

    #[error("iteration budget of {iterations} steps exhausted {distance} away from the set")]
    NoConvergence { iterations: usize, distance: f64 },

    #[error("nearest-point-in-hull search did not converge after {iterations} steps")]
    ProjectionNoConvergence { iterations: usize },

    #[error("contraction {beta} is not certified: measured nonconvexity is {alpha_hat} (margin {margin})")]
    ContractionNotCertified {
        beta: f64,
        alpha_hat: f64,
        margin: f64,
    },

    #[error("{point:?} lies outside the working box")]
    OutsideWorkingBox { point: Point },

    #[error("grid point {index} is {distance} from its value, not an {eps}-selection")]
    NotEpsilonSelection {
        index: usize,
        distance: f64,
        eps: f64,
    },

    #[error("point {index} is {distance} away from the target set")]
    NotInTarget { index: usize, distance: f64 },

    #[error("operators do not share the same target set")]
    MismatchedTargets,

    #[error("weights must be nonnegative, finite and sum to one")]
    InvalidWeights,

    #[error(
        "reprojection precondition fails at {probe:?}: distance {distance} is not below {bound}"
    )]
    ReprojectionPrecondition {
        probe: Point,
        distance: f64,
        bound: f64,
    },

    #[error("family member {index} fails paraconvexity at level {level}: deficit {deficit}")]
    FamilyMemberNotParaconvex {
        index: usize,
        level: f64,
        deficit: f64,
    },

    #[error("set-valued map has {domain} domain points but {values} values")]
    LengthMismatch { domain: usize, values: usize },
}

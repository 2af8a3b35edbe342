//! Function descriptors on the line, the circle, and the plane.

mod circle;
mod holder;
mod line;
mod registry;
mod tensor;

pub use circle::{
    alpha_grid, analyze, e_k, synthesize, wrap_angle, CircleFunction, FourierSpectrum, Periodic, PeriodicFn, INV_SQRT_2PI,
};
pub(crate) use circle::check_gamma;
pub use holder::{holder_seminorm_estimate, HolderWitness, Provenance};
pub use line::{CustomFn, Function1D, RealFunction, Support};
pub use tensor::{PlaneFn, PlaneFunction, PolarTensorSum, ProjectiveBound, TensorSum2D};

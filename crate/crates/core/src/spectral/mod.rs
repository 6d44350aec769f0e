//! Grids, series and weighted norms.

mod bracket;
mod family;
mod norms;
pub mod quadrature;
mod sgrid;
mod theta;

pub use family::FlowLineFamily;
pub use bracket::{BracketField, FieldSamples, Order};
pub use norms::{
    analyticity_width, j_norm, kondratev_norm, kondratev_norm_sigma, width_or_infinite, x_sigma_norm,
    WidthEstimate, AMPLITUDE_FLOOR,
};
pub use sgrid::{SGrid, SGridFunction};
pub use theta::{sample_points, ThetaSeries};
#[allow(unused_imports)]
pub(crate) use theta::Dft;

//! Experiments on top of the line and circle maps.

mod census;
mod circle;
mod classify;
mod scan;

pub use census::{census, CensusReport, CensusRow};
pub use circle::{gap, reduce, CircleAffineMap, Gap, Reduction};
pub use classify::{
    classify, classify_circle, default_start_points, Classification, ClassificationStatus, ClassifyBudget,
};
pub use scan::{
    box_dimension, geometric_scales, refine_and_boxdim, scan, BoxDimension, ScanReport, ScanRow, ScanStatus,
};

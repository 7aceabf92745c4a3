//! Lines, parallel classes, spaces of axes and their directed double covers.

pub mod axes;
pub mod class;
pub mod line;

pub use line::{flat_strip_distance, DirectionFrame, Line};
pub use axes::{
    choose_axes, directed_double, enumerate_axes, swaps_sheets, well_behaved_check, AxesChoice, AxesKind, AxesSpace, AxisClass,
    DirectedAxes, DirectedLine, WellBehaved,
};
pub use class::{class_map, induced_group, induced_isometry, parallel_class, ClassSpace};

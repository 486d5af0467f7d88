//! Linear orders given by terms: points, cuts, definability of final
//! segments and definable condensation.

pub mod classify;
pub mod condense;
pub mod cut;
pub mod fo;
pub mod layout;
pub mod point;
pub mod props;
pub mod schema;
pub mod term;

pub use classify::{
    classify_final_segment, drk_order, validate_drk, Completeness, CutClass, DrkDescription,
    DrkReport, SegmentVerdict,
};
pub use condense::{condense, condense_iter, Color, ColoredChain};
pub use cut::{Cut, CutProfile, Side};
pub use point::{Chain, DensePoint, Locator, Point};
pub use props::{order_props, point_props, OrderProps, PointProps};
pub use schema::{schema_extension, Extension, Schema};
pub use term::{normalize, OrderTerm};

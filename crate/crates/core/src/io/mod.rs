//! Instance and tour file formats, instance generation and result reporting.

pub mod generate;
pub mod report;
pub mod tourfile;
pub mod tsplib;

pub use generate::{generate_instance, InstanceKind};
pub use report::{report_results, Report, RunRecord};
pub use tourfile::{parse_tour, parse_tour_text, write_tour, write_tour_string};
pub use tsplib::{parse_tsplib, parse_tsplib_text, write_tsplib, write_tsplib_string};

//! SVG charts and curve tables.

mod format;
mod svg;
mod table;

pub use self::format::format_significant;
pub use self::svg::{render_chart, ChartStyle, Viewport, DEFAULT_PALETTE};
pub use self::table::{read_curve_csv, write_curve_csv, CurveRow, CSV_HEADER};

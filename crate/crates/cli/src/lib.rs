//! Reading `.cy3` presentation files and running the verification pipeline on them.

pub mod format;
pub mod pipeline;
pub mod render;

pub use format::{parse_presentation, InputError, Instance, PresentationFile};
pub use pipeline::{run_pipeline, Check, PipelineInput, Report, StageReport, Status};
pub use render::render_text;

pub mod commands;
pub mod error;
pub mod report;
pub mod session;

pub use commands::{run_command, Options, COMMANDS};
pub use error::CliError;
pub use report::Report;
pub use session::{parse_session, SessionSpec};

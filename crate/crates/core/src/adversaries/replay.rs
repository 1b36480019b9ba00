use std::path::Path;

use crate::error::Result;
use crate::experiment::io::read_stream;
use crate::types::StreamEvent;

/// Items recorded in a stream file, in file order.
pub fn replay_source(path: impl AsRef<Path>) -> Result<Vec<StreamEvent>> {
    read_stream(path)
}

//! Model files and CSV input/output.

mod csv_io;
mod model_file;

use std::io::Write;
use std::path::Path;

use crate::error::{EifError, Result};

pub use csv_io::{
    format_sig9, read_csv, write_convergence_csv, write_dataset_csv, write_grid_csv, write_scores_csv,
    write_stats_csv, LabelColumn,
};
pub use model_file::{
    load_forest, model_from_str, model_to_string, save_forest, FORMAT_MAGIC, FORMAT_VERSION,
};

/// Writes through a temporary file in the target directory and renames it into
/// place after an fsync, so a failed write never leaves a partial file behind.
pub(crate) fn write_atomic(path: &Path, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let err = |e| EifError::io(path, e);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    {
        let mut w = std::io::BufWriter::new(tmp.as_file_mut());
        body(&mut w).map_err(err)?;
        w.flush().map_err(err)?;
    }
    tmp.as_file().sync_all().map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

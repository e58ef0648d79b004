//! Line-based checkpoint files for resumable range searches.
//!
//! ```text
//! search_id exotic-prime:from=2:to=1000000000
//! completed 4194306
//! 7
//! 47
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchCheckpoint {
    pub search_id: String,
    /// Every candidate below this bound has been examined.
    pub last_completed_hi: u64,
    /// Ascending, all below `last_completed_hi`.
    pub hits: Vec<u64>,
}

impl SearchCheckpoint {
    pub fn new(search_id: impl Into<String>, last_completed_hi: u64) -> Self {
        SearchCheckpoint {
            search_id: search_id.into(),
            last_completed_hi,
            hits: Vec::new(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "search_id {}\ncompleted {}\n",
            self.search_id, self.last_completed_hi
        );
        for hit in &self.hits {
            out.push_str(&hit.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut lines = text.lines();
        let search_id = lines
            .next()
            .and_then(|l| l.strip_prefix("search_id "))
            .ok_or("missing `search_id` header")?
            .to_string();
        if search_id.is_empty() || search_id.contains(char::is_whitespace) {
            return Err(format!("malformed search id {search_id:?}"));
        }
        let last_completed_hi = lines
            .next()
            .and_then(|l| l.strip_prefix("completed "))
            .ok_or("missing `completed` line")?
            .parse::<u64>()
            .map_err(|e| format!("bad completed bound: {e}"))?;
        let mut hits = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let hit = line
                .parse::<u64>()
                .map_err(|e| format!("bad hit on line {}: {e}", i + 3))?;
            if hits.last().is_some_and(|&prev| prev >= hit) {
                return Err(format!("hits not strictly ascending at {hit}"));
            }
            if hit >= last_completed_hi {
                return Err(format!(
                    "hit {hit} beyond completed bound {last_completed_hi}"
                ));
            }
            hits.push(hit);
        }
        Ok(SearchCheckpoint {
            search_id,
            last_completed_hi,
            hits,
        })
    }

    /// `Ok(None)` if the file does not exist.
    pub fn load(path: &Path) -> Result<Option<Self>> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        Self::parse(&text)
            .map(Some)
            .map_err(|reason| Error::Checkpoint {
                path: path.to_path_buf(),
                reason,
            })
    }

    /// Writes through a temporary sibling and renames, so a crash never
    /// leaves a half-written checkpoint.
    pub fn store(&self, path: &Path) -> Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = Path::new(&tmp);
        {
            let mut file = fs::File::create(tmp)?;
            file.write_all(self.to_text().as_bytes())?;
            file.sync_all()?;
        }
        fs::rename(tmp, path)?;
        Ok(())
    }
}

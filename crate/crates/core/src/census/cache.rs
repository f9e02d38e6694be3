use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{default_labels, enumerate_bounded, Bounds, Census, CensusDoc, CensusError, Kind};

/// How a census request was served.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Computed,
    Loaded,
    /// The stored file failed verification and was recomputed.
    Healed(String),
}

/// Content-addressed census store: `{kind}-g{g}-n{n}.json` plus a
/// `.sha256` sidecar holding the hex digest of the file.
#[derive(Clone, Debug)]
pub struct CensusCache {
    dir: PathBuf,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CensusError + '_ {
    move |source| CensusError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn digest_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl CensusCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CensusCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// File name for a request. Non-default labels or bounds add a short
    /// digest of their description.
    pub fn file_name(kind: Kind, g: usize, labels: &[String], bounds: Bounds) -> String {
        let mut sorted = labels.to_vec();
        sorted.sort();
        let base = format!("{kind}-g{g}-n{}", labels.len());
        let mut extra = String::new();
        if sorted != default_labels(labels.len()) {
            extra.push_str(&format!("labels={}", serde_json::to_string(&sorted).unwrap()));
        }
        if !bounds.is_unbounded() {
            extra.push_str(&format!("bounds={}", serde_json::to_string(&bounds).unwrap()));
        }
        if extra.is_empty() {
            format!("{base}.json")
        } else {
            format!("{base}-{}.json", &digest_hex(extra.as_bytes())[..12])
        }
    }

    pub fn path_for(&self, kind: Kind, g: usize, labels: &[String], bounds: Bounds) -> PathBuf {
        self.dir.join(Self::file_name(kind, g, labels, bounds))
    }

    fn sidecar(path: &Path) -> PathBuf {
        let mut s = path.as_os_str().to_owned();
        s.push(".sha256");
        PathBuf::from(s)
    }

    /// Reads and verifies a stored census.
    pub fn load(&self, path: &Path) -> Result<Census, CensusError> {
        let corrupt = || CensusError::CacheCorrupt {
            path: path.display().to_string(),
        };
        let bytes = fs::read(path).map_err(io_err(path))?;
        let stored = fs::read_to_string(Self::sidecar(path)).map_err(|_| corrupt())?;
        if stored.trim() != digest_hex(&bytes) {
            return Err(corrupt());
        }
        let doc: CensusDoc = serde_json::from_slice(&bytes).map_err(|_| corrupt())?;
        Census::from_doc(&doc).map_err(|_| corrupt())
    }

    fn store(&self, path: &Path, census: &Census) -> Result<(), CensusError> {
        fs::create_dir_all(&self.dir).map_err(io_err(&self.dir))?;
        let text = census.to_json();
        let digest = digest_hex(text.as_bytes());
        // write-then-rename keeps readers from seeing partial files
        let tmp = path.with_extension("json.tmp");
        {
            let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
            f.write_all(text.as_bytes()).map_err(io_err(&tmp))?;
            f.sync_all().map_err(io_err(&tmp))?;
        }
        fs::rename(&tmp, path).map_err(io_err(path))?;
        let side = Self::sidecar(path);
        fs::write(&side, format!("{digest}\n")).map_err(io_err(&side))?;
        Ok(())
    }

    /// Loads a verified census, or computes and stores it. A file failing
    /// verification is recomputed and overwritten.
    pub fn load_or_compute(
        &self,
        kind: Kind,
        g: usize,
        labels: &[String],
        bounds: Bounds,
    ) -> Result<(Census, CacheOutcome), CensusError> {
        let path = self.path_for(kind, g, labels, bounds);
        let outcome = if path.exists() {
            match self.load(&path) {
                Ok(c) if c.kind == kind && c.rank == g && c.bounds == bounds => return Ok((c, CacheOutcome::Loaded)),
                Ok(_) => CacheOutcome::Healed("stored census answers a different request".into()),
                Err(e @ CensusError::CacheCorrupt { .. }) => CacheOutcome::Healed(e.to_string()),
                Err(e) => return Err(e),
            }
        } else {
            CacheOutcome::Computed
        };
        let census = enumerate_bounded(kind, g, labels, bounds)?;
        self.store(&path, &census)?;
        Ok((census, outcome))
    }
}

//! On-disk operator cache. Files hold the canonical serialization and are
//! named by a SHA-256 of the artifact version and the build parameters, so
//! bumping the version invalidates every entry.

use std::fs;
use std::path::PathBuf;

use rscn_core::{NormalOp, ParamMode};
use sha2::{Digest, Sha256};

const ARTIFACT_VERSION: &str = "rscn-cache v1";

#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    pub fn key(n: usize, mode: ParamMode, op: &str) -> String {
        let digest = Sha256::digest(format!("{ARTIFACT_VERSION}\n{n}\n{mode}\n{op}\n").as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Loads the entry if present and well formed, otherwise builds and
    /// stores it. Unreadable entries are rebuilt, never trusted.
    pub fn get_or_build<E>(
        &self,
        n: usize,
        mode: ParamMode,
        op: &str,
        build: impl FnOnce() -> Result<NormalOp, E>,
    ) -> Result<NormalOp, E> {
        let Some(dir) = &self.dir else { return build() };
        let path = dir.join(format!("{}.op", Self::key(n, mode, op)));
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok((o, m)) = NormalOp::deserialize(&text) {
                if m == mode && o.rank() == n {
                    return Ok(o);
                }
            }
        }
        let o = build()?;
        // A failed write only costs a rebuild next time.
        if fs::create_dir_all(dir).is_ok() {
            let tmp = path.with_extension("tmp");
            if fs::write(&tmp, o.serialize(mode)).is_ok() {
                let _ = fs::rename(&tmp, &path);
            }
        }
        Ok(o)
    }
}

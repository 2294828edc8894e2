//! A directory of verified KDF and kaleidoscope JSON files, one per
//! `(order, schema)`, named `k<order>_<schema>.json`.

use std::fs;
use std::path::{Path, PathBuf};

use kaleido_core::designs::{develop, verify_kaleidoscope, verify_kdf, Kaleidoscope, Kdf};
use kaleido_core::io::{kaleidoscope_from_json, kdf_from_json, parse, to_canonical_string};
use serde::Serialize;
use serde_json::Value;

use crate::failure::{malformed, Failure};

pub enum Artifact {
    Kdf(Kdf),
    Kaleidoscope(Kaleidoscope),
}

impl Artifact {
    /// Reads either format, telling them apart by their `blocks` / `planes` field.
    pub fn from_json(v: &Value) -> Result<Artifact, Failure> {
        if v.get("blocks").is_some() {
            Ok(Artifact::Kdf(kdf_from_json(v)?))
        } else if v.get("planes").is_some() {
            Ok(Artifact::Kaleidoscope(kaleidoscope_from_json(v)?))
        } else {
            Err(malformed("expected a KDF (`blocks`) or a kaleidoscope (`planes`)"))
        }
    }

    pub fn order(&self) -> usize {
        match self {
            Artifact::Kdf(k) => k.group.order() as usize,
            Artifact::Kaleidoscope(k) => k.v,
        }
    }

    pub fn schema_name(&self) -> &str {
        match self {
            Artifact::Kdf(k) => &k.schema.name,
            Artifact::Kaleidoscope(k) => &k.schema.name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Artifact::Kdf(_) => "kdf",
            Artifact::Kaleidoscope(_) => "kaleidoscope",
        }
    }

    pub fn verify(&self) -> Result<bool, Failure> {
        Ok(match self {
            Artifact::Kdf(k) => verify_kdf(k)?.valid,
            Artifact::Kaleidoscope(k) => verify_kaleidoscope(k)?.valid,
        })
    }

    /// The kaleidoscope itself, or the development of the KDF.
    pub fn into_kaleidoscope(self) -> Result<Kaleidoscope, Failure> {
        match self {
            Artifact::Kdf(k) => Ok(develop(&k)?),
            Artifact::Kaleidoscope(k) => Ok(k),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Entry {
    pub file: String,
    pub kind: String,
    pub order: usize,
    pub schema: String,
    pub valid: bool,
}

pub struct Catalog {
    root: PathBuf,
    verify_on_read: bool,
}

impl Catalog {
    pub fn new(root: impl Into<PathBuf>, verify_on_read: bool) -> Self {
        Catalog { root: root.into(), verify_on_read }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn file_name(order: usize, schema: &str) -> String {
        format!("k{order}_{schema}.json")
    }

    /// Verifies and stores an artifact, replacing any previous one for the
    /// same order and schema.
    pub fn add(&self, text: &str) -> Result<Entry, Failure> {
        let value = parse(text)?;
        let artifact = Artifact::from_json(&value)?;
        if !artifact.verify()? {
            return Err(Failure::Invalid(format!("{} of order {} does not verify", artifact.kind(), artifact.order())));
        }
        fs::create_dir_all(&self.root)?;
        let name = Self::file_name(artifact.order(), artifact.schema_name());
        fs::write(self.root.join(&name), to_canonical_string(&value))?;
        Ok(Entry {
            file: name,
            kind: artifact.kind().into(),
            order: artifact.order(),
            schema: artifact.schema_name().into(),
            valid: true,
        })
    }

    pub fn get(&self, order: usize, schema: &str) -> Result<(Value, Artifact), Failure> {
        let path = self.root.join(Self::file_name(order, schema));
        if !path.exists() {
            return Err(Failure::Invalid(format!("no catalog entry {}", path.display())));
        }
        let value = parse(&fs::read_to_string(&path)?)?;
        let artifact = Artifact::from_json(&value)?;
        if self.verify_on_read && !artifact.verify()? {
            return Err(Failure::Invalid(format!("catalog entry {} no longer verifies", path.display())));
        }
        Ok((value, artifact))
    }

    pub fn list(&self) -> Result<Vec<Entry>, Failure> {
        if !self.root.exists() {
            return Ok(Vec::new());
        }
        let mut names: Vec<String> = fs::read_dir(&self.root)?
            .filter_map(|e| e.ok())
            .map(|e| e.file_name().to_string_lossy().into_owned())
            .filter(|n| n.starts_with('k') && n.ends_with(".json"))
            .collect();
        names.sort();
        let mut out = Vec::new();
        for name in names {
            let value = parse(&fs::read_to_string(self.root.join(&name))?)?;
            let artifact = Artifact::from_json(&value)?;
            let valid = if self.verify_on_read { artifact.verify()? } else { true };
            out.push(Entry {
                file: name,
                kind: artifact.kind().into(),
                order: artifact.order(),
                schema: artifact.schema_name().into(),
                valid,
            });
        }
        Ok(out)
    }
}

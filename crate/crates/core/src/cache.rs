//! Versioned on-disk cache for realized spaces and Hecke operator matrices.
//!
//! One JSON file per `(q, N, ring)` space and per `(q, N, ring, p, route)`
//! operator. Scalars are stored as text so that rationals round-trip exactly.
//! Files written with another format version are treated as misses.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffpoly::Ideal;
use crate::hecke::{BasisId, HeckeOp};
use crate::linalg::{Field, Matrix};
use crate::projline::ProjectiveLine;
use crate::symspace::SymSpace;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct SpaceFile {
    format_version: u32,
    q: u32,
    level: String,
    ring: String,
    ngens: usize,
    basis: Vec<usize>,
    projection: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct OperatorFile {
    format_version: u32,
    q: u32,
    level: String,
    ring: String,
    index: String,
    route: String,
    dim: usize,
    dropped_terms: usize,
    rows: Vec<Vec<String>>,
}

/// Only the header fields, for listing.
#[derive(Deserialize)]
struct Header {
    format_version: u32,
    q: u32,
    level: String,
    ring: String,
    #[serde(default)]
    index: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CacheEntry {
    pub file: String,
    pub kind: String,
    pub q: u32,
    pub level: String,
    pub ring: String,
    pub index: Option<String>,
    pub format_version: u32,
    pub current: bool,
    pub bytes: u64,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

fn ring_tag<F: Field>(field: &F) -> String {
    if field.characteristic() == 0 {
        "q".to_string()
    } else {
        format!("f{}", field.characteristic())
    }
}

impl Cache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Cache> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(Cache { dir: dir.as_ref().to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn space_path(&self, level: &Ideal, ring: &str) -> PathBuf {
        let g = level.generator();
        self.dir.join(format!("q{}_n{}_{}.space.json", g.field_size(), g.index(), ring))
    }

    fn op_path(&self, level: &Ideal, ring: &str, p: &Ideal, route: &str) -> PathBuf {
        let g = level.generator();
        self.dir.join(format!(
            "q{}_n{}_{}_p{}_{}.op.json",
            g.field_size(),
            g.index(),
            ring,
            p.generator().index(),
            route
        ))
    }

    fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Option<T>> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let header: Header =
            serde_json::from_str(&text).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        if header.format_version != FORMAT_VERSION {
            return Ok(None);
        }
        serde_json::from_str(&text).map(Some).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
    }

    fn write<T: Serialize>(path: &Path, value: &T) -> Result<()> {
        let text = serde_json::to_string(value).map_err(|e| Error::Cache(e.to_string()))?;
        // write-then-rename so concurrent readers never see a partial file
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, text)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    fn parse_vec<F: Field>(field: &F, v: &[String], path: &Path) -> Result<Vec<F::Elem>> {
        v.iter()
            .map(|s| field.parse(s).ok_or_else(|| Error::Cache(format!("{}: bad scalar {s:?}", path.display()))))
            .collect()
    }

    pub fn load_space<F: Field>(&self, p1: Arc<ProjectiveLine>, field: F) -> Result<Option<SymSpace<F>>> {
        let ring = ring_tag(&field);
        let path = self.space_path(p1.level(), &ring);
        let Some(file) = Self::read::<SpaceFile>(&path)? else { return Ok(None) };
        if file.level != p1.level().to_string() || file.ngens != p1.len() || file.projection.len() != p1.len() {
            return Err(Error::Cache(format!("{}: does not match level {}", path.display(), p1.level())));
        }
        let projection =
            file.projection.iter().map(|v| Self::parse_vec(&field, v, &path)).collect::<Result<Vec<_>>>()?;
        Ok(Some(SymSpace::from_parts(field, p1, file.basis, projection)))
    }

    pub fn store_space<F: Field>(&self, space: &SymSpace<F>) -> Result<()> {
        let f = space.field();
        let level = space.p1().level();
        let file = SpaceFile {
            format_version: FORMAT_VERSION,
            q: level.field_size(),
            level: level.to_string(),
            ring: ring_tag(f),
            ngens: space.p1().len(),
            basis: space.basis().to_vec(),
            projection: space.projection().iter().map(|v| v.iter().map(|x| f.format(x)).collect()).collect(),
        };
        Self::write(&self.space_path(level, &file.ring), &file)
    }

    pub fn load_op<F: Field>(&self, space: &SymSpace<F>, p: &Ideal, route: &str) -> Result<Option<HeckeOp<F>>> {
        let f = space.field();
        let path = self.op_path(space.p1().level(), &ring_tag(f), p, route);
        let Some(file) = Self::read::<OperatorFile>(&path)? else { return Ok(None) };
        if file.dim != space.dim() || file.index != p.to_string() {
            return Err(Error::Cache(format!("{}: does not match the space", path.display())));
        }
        let rows = file.rows.iter().map(|r| Self::parse_vec(f, r, &path)).collect::<Result<Vec<_>>>()?;
        Ok(Some(HeckeOp {
            label: format!("T_({})", p),
            index: Some(p.clone()),
            matrix: Matrix::from_rows(rows, file.dim),
            basis: BasisId::ambient(space),
            dropped_terms: file.dropped_terms,
        }))
    }

    pub fn store_op<F: Field>(&self, space: &SymSpace<F>, op: &HeckeOp<F>, route: &str) -> Result<()> {
        let f = space.field();
        let p = op.index.as_ref().ok_or_else(|| Error::Cache("only single-index operators are cached".into()))?;
        let level = space.p1().level();
        let file = OperatorFile {
            format_version: FORMAT_VERSION,
            q: level.field_size(),
            level: level.to_string(),
            ring: ring_tag(f),
            index: p.to_string(),
            route: route.to_string(),
            dim: op.dim(),
            dropped_terms: op.dropped_terms,
            rows: (0..op.matrix.rows()).map(|i| op.matrix.row(i).iter().map(|x| f.format(x)).collect()).collect(),
        };
        Self::write(&self.op_path(level, &file.ring, p, route), &file)
    }

    fn files(&self) -> Result<Vec<PathBuf>> {
        let mut out = Vec::new();
        for entry in fs::read_dir(&self.dir)? {
            let path = entry?.path();
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
            if name.ends_with(".space.json") || name.ends_with(".op.json") {
                out.push(path);
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn entries(&self) -> Result<Vec<CacheEntry>> {
        let mut out = Vec::new();
        for path in self.files()? {
            let text = fs::read_to_string(&path)?;
            let header: Header =
                serde_json::from_str(&text).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            out.push(CacheEntry {
                kind: if name.ends_with(".op.json") { "operator" } else { "space" }.to_string(),
                file: name,
                q: header.q,
                level: header.level,
                ring: header.ring,
                index: header.index,
                format_version: header.format_version,
                current: header.format_version == FORMAT_VERSION,
                bytes: text.len() as u64,
            });
        }
        Ok(out)
    }

    /// Removes every cache file; returns how many were deleted.
    pub fn clear(&self) -> Result<usize> {
        let files = self.files()?;
        for f in &files {
            fs::remove_file(f)?;
        }
        Ok(files.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::hecke_merel;
    use crate::linalg::{PrimeField, Rationals};
    use crate::symspace::{build_relations, quotient_basis};

    fn p1(q: u32, s: &str) -> Arc<ProjectiveLine> {
        Arc::new(ProjectiveLine::new(&Ideal::parse(q, s).unwrap()).unwrap())
    }

    #[test]
    fn space_round_trip_over_both_rings() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let pl = p1(3, "T^3+2*T+2");
        let rels = build_relations(&pl);
        let a = quotient_basis(&rels, pl.clone(), Rationals);
        assert!(cache.load_space(pl.clone(), Rationals).unwrap().is_none());
        cache.store_space(&a).unwrap();
        let b = cache.load_space(pl.clone(), Rationals).unwrap().unwrap();
        assert_eq!(a.basis(), b.basis());
        assert_eq!(a.projection(), b.projection());
        let f = quotient_basis(&rels, pl.clone(), PrimeField::new(3));
        cache.store_space(&f).unwrap();
        assert_eq!(cache.load_space(pl, PrimeField::new(3)).unwrap().unwrap().projection(), f.projection());
        assert_eq!(cache.entries().unwrap().len(), 2);
    }

    #[test]
    fn operator_round_trip_and_clear() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let pl = p1(2, "T^4+T+1");
        let sp = quotient_basis(&build_relations(&pl), pl, PrimeField::new(2));
        let p = Ideal::parse(2, "T+1").unwrap();
        let t = hecke_merel(&p, &sp).unwrap();
        cache.store_op(&sp, &t, "merel").unwrap();
        let back = cache.load_op(&sp, &p, "merel").unwrap().unwrap();
        assert_eq!(back.matrix, t.matrix);
        assert!(cache.load_op(&sp, &p, "definitional").unwrap().is_none());
        assert_eq!(cache.clear().unwrap(), 1);
        assert!(cache.entries().unwrap().is_empty());
    }

    #[test]
    fn other_format_version_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let pl = p1(2, "T^3+T+1");
        let sp = quotient_basis(&build_relations(&pl), pl.clone(), Rationals);
        cache.store_space(&sp).unwrap();
        let path = cache.space_path(pl.level(), "q");
        let text = fs::read_to_string(&path).unwrap().replace("\"format_version\":1", "\"format_version\":0");
        fs::write(&path, text).unwrap();
        assert!(cache.load_space(pl, Rationals).unwrap().is_none());
        assert!(!cache.entries().unwrap()[0].current);
    }
}

//! Binary checkpoint format.
//!
//! All integers and floats are little-endian.
//!
//! ```text
//! magic        8 bytes   "KGEMBCKP"
//! version      u32       1
//! family       u8        0 = TransE, 1 = ComplEx
//! loss         u8        0 = pairwise, 1 = multiclass-nll
//! norm         u8        1 = L1, 2 = L2
//! reserved     u8        0
//! k            u32
//! n            u32       entity count
//! m            u32       relation count
//! seed         u64
//! eta          u32
//! epochs       u32
//! batches      u32
//! margin       f64
//! lr           f64
//! entities     n × (u32 byte length, UTF-8 label)
//! relations    m × (u32 byte length, UTF-8 label)
//! entity table n × width f32, row-major
//! relation tbl m × width f32, row-major
//! ```
//!
//! `width` is `k` for TransE and `2k` for ComplEx.

use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::Vocabulary;
use crate::model::{EmbeddingModel, Family, LossKind, ModelConfig, Norm};

pub const MAGIC: &[u8; 8] = b"KGEMBCKP";
pub const FORMAT_VERSION: u32 = 1;

pub fn encode(model: &EmbeddingModel) -> Vec<u8> {
    let c = model.config();
    let mut out = Vec::with_capacity(64 + 4 * (model.entity_table().len() + model.relation_table().len()));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.push(match c.family {
        Family::TransE => 0,
        Family::ComplEx => 1,
    });
    out.push(match c.loss {
        LossKind::Pairwise => 0,
        LossKind::MulticlassNll => 1,
    });
    out.push(match c.norm {
        Norm::L1 => 1,
        Norm::L2 => 2,
    });
    out.push(0);
    for v in [c.k, model.entity_count(), model.relation_count()] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    out.extend_from_slice(&c.seed.to_le_bytes());
    for v in [c.eta, c.epochs, c.batches_count] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    out.extend_from_slice(&c.margin.to_le_bytes());
    out.extend_from_slice(&c.learning_rate.to_le_bytes());
    for vocab in [model.entities(), model.relations()] {
        for label in vocab.iter() {
            out.extend_from_slice(&(label.len() as u32).to_le_bytes());
            out.extend_from_slice(label.as_bytes());
        }
    }
    for v in model.entity_table().iter().chain(model.relation_table()) {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::Checkpoint(format!("truncated at byte {}", self.pos)))?;
        let bytes = &self.buf[self.pos..end];
        self.pos = end;
        Ok(bytes)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn vocab(&mut self, count: usize) -> Result<Vocabulary> {
        let mut labels = Vec::with_capacity(count.min(1 << 20));
        for _ in 0..count {
            let len = self.u32()? as usize;
            let bytes = self.take(len)?;
            let label = std::str::from_utf8(bytes)
                .map_err(|_| Error::Checkpoint("label is not UTF-8".into()))?;
            labels.push(label.to_owned());
        }
        Vocabulary::from_labels(labels)
    }

    fn table(&mut self, len: usize) -> Result<Vec<f32>> {
        let bytes = self.take(len.checked_mul(4).ok_or_else(|| Error::Checkpoint("table too large".into()))?)?;
        Ok(bytes
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }
}

pub fn decode(bytes: &[u8]) -> Result<EmbeddingModel> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(8)? != MAGIC {
        return Err(Error::Checkpoint("bad magic bytes".into()));
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(Error::Checkpoint(format!("unsupported format version {version}")));
    }
    let family = match r.u8()? {
        0 => Family::TransE,
        1 => Family::ComplEx,
        other => return Err(Error::Checkpoint(format!("unknown family tag {other}"))),
    };
    let loss = match r.u8()? {
        0 => LossKind::Pairwise,
        1 => LossKind::MulticlassNll,
        other => return Err(Error::Checkpoint(format!("unknown loss tag {other}"))),
    };
    let norm = match r.u8()? {
        1 => Norm::L1,
        2 => Norm::L2,
        other => return Err(Error::Checkpoint(format!("unknown norm tag {other}"))),
    };
    r.u8()?;
    let k = r.u32()? as usize;
    let n = r.u32()? as usize;
    let m = r.u32()? as usize;
    let seed = r.u64()?;
    let eta = r.u32()? as usize;
    let epochs = r.u32()? as usize;
    let batches_count = r.u32()? as usize;
    let margin = r.f64()?;
    let learning_rate = r.f64()?;
    let config = ModelConfig {
        family,
        k,
        eta,
        epochs,
        batches_count,
        seed,
        loss,
        margin,
        learning_rate,
        norm,
    };
    let entities = r.vocab(n)?;
    let relations = r.vocab(m)?;
    let width = family.width(k);
    let entity_table = r.table(n * width)?;
    let relation_table = r.table(m * width)?;
    if r.pos != bytes.len() {
        return Err(Error::Checkpoint(format!("{} trailing bytes", bytes.len() - r.pos)));
    }
    EmbeddingModel::from_parts(config, Arc::new(entities), Arc::new(relations), entity_table, relation_table)
        .map_err(|e| Error::Checkpoint(e.to_string()))
}

/// Hex SHA-256 of the encoded checkpoint.
pub fn checksum(model: &EmbeddingModel) -> String {
    sha256_hex(&encode(model))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Writes the checkpoint through a temporary file in the same directory and
/// renames it into place, so `path` never holds a partial checkpoint.
pub fn save(model: &EmbeddingModel, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), &encode(model))
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<EmbeddingModel> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use super::VocabMapping;
use crate::corpus::Corpus;
use crate::tsv;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingFormat {
    /// One row per line, tab-separated decimals.
    Tsv,
    /// `u32` rows, `u32` columns, then row-major `f32`; all little-endian.
    Binary,
}

impl EmbeddingFormat {
    /// `.bin` means binary, anything else TSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("bin") => EmbeddingFormat::Binary,
            _ => EmbeddingFormat::Tsv,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            EmbeddingFormat::Tsv => "tsv",
            EmbeddingFormat::Binary => "bin",
        }
    }
}

impl FromStr for EmbeddingFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsv" => Ok(EmbeddingFormat::Tsv),
            "bin" | "binary" => Ok(EmbeddingFormat::Binary),
            _ => Err(Error::InvalidArgument(format!("unknown embedding format `{s}`"))),
        }
    }
}

/// Row-major `f32` matrix, one row per vocabulary slot.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f32>,
}

impl EmbeddingMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{} values do not fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(EmbeddingMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn parse_tsv(text: &str, path: &Path) -> Result<Self> {
        let mut data = Vec::new();
        let mut rows = 0;
        let mut cols = None;
        for (i, line) in text.lines().enumerate() {
            let parse_err = |message: String| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message,
            };
            let before = data.len();
            for cell in line.split('\t') {
                let v: f32 = cell
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(format!("`{cell}` is not a number")))?;
                data.push(v);
            }
            let width = data.len() - before;
            match cols {
                None => cols = Some(width),
                Some(c) if c != width => {
                    return Err(parse_err(format!("expected {c} columns, found {width}")));
                }
                _ => {}
            }
            rows += 1;
        }
        EmbeddingMatrix::new(rows, cols.unwrap_or(0), data)
    }

    pub fn parse_binary(bytes: &[u8], path: &Path) -> Result<Self> {
        let parse_err = |message: &str| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: message.to_string(),
        };
        if bytes.len() < 8 {
            return Err(parse_err("truncated header"));
        }
        let rows = u32::from_le_bytes(bytes[0..4].try_into().expect("4 bytes")) as usize;
        let cols = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes")) as usize;
        let body = &bytes[8..];
        if body.len() != rows * cols * 4 {
            return Err(parse_err("body length does not match the header"));
        }
        let data = body
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes(b.try_into().expect("4 bytes")))
            .collect();
        EmbeddingMatrix::new(rows, cols, data)
    }

    pub fn load(path: impl AsRef<Path>, format: EmbeddingFormat) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        match format {
            EmbeddingFormat::Binary => EmbeddingMatrix::parse_binary(&bytes, path),
            EmbeddingFormat::Tsv => {
                let text = String::from_utf8(bytes).map_err(|_| Error::Decode {
                    path: path.to_path_buf(),
                    line: 0,
                })?;
                EmbeddingMatrix::parse_tsv(&text, path)
            }
        }
    }

    /// Serialized form. Values print in shortest round-trip notation, so a
    /// file written here reloads and rewrites byte-identically.
    pub fn to_bytes(&self, format: EmbeddingFormat) -> Vec<u8> {
        match format {
            EmbeddingFormat::Binary => {
                let mut out = Vec::with_capacity(8 + self.data.len() * 4);
                out.extend_from_slice(&(self.rows as u32).to_le_bytes());
                out.extend_from_slice(&(self.cols as u32).to_le_bytes());
                for v in &self.data {
                    out.extend_from_slice(&v.to_le_bytes());
                }
                out
            }
            EmbeddingFormat::Tsv => {
                let mut s = String::new();
                for i in 0..self.rows {
                    for (j, v) in self.row(i).iter().enumerate() {
                        if j > 0 {
                            s.push('\t');
                        }
                        s.push_str(&v.to_string());
                    }
                    s.push('\n');
                }
                s.into_bytes()
            }
        }
    }

    pub fn save(&self, path: impl AsRef<Path>, format: EmbeddingFormat) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_bytes(format)).map_err(|e| Error::io(path, e))
    }
}

/// Files written by [`emit_transfer_bundle`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundlePaths {
    pub vocab: PathBuf,
    pub embeddings: PathBuf,
    pub mapping: PathBuf,
    pub unused_parent: PathBuf,
}

impl BundlePaths {
    pub fn all(&self) -> [&Path; 4] {
        [&self.vocab, &self.embeddings, &self.mapping, &self.unused_parent]
    }
}

/// Slots that still hold their parent token but whose token never appears
/// when the child corpus is segmented with the output vocabulary.
pub fn unused_parent_slots(mapping: &VocabMapping, child_corpus: &Corpus) -> Vec<usize> {
    let vocab = mapping.vocabulary();
    let seen = child_corpus
        .sentences
        .par_iter()
        .fold(
            || vec![false; vocab.len()],
            |mut seen, s| {
                for p in vocab.pieces(s.as_str()) {
                    if let Some(id) = p.id {
                        seen[id as usize] = true;
                    }
                }
                seen
            },
        )
        .reduce(
            || vec![false; vocab.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x |= y);
                a
            },
        );
    mapping
        .entries
        .iter()
        .filter(|e| e.token == e.parent_token && !seen[e.slot])
        .map(|e| e.slot)
        .collect()
}

/// Writes `vocab.txt`, `embeddings.<tsv|bin>`, `mapping.tsv` and
/// `unused_parent.tsv` into `out_dir`. The embedding rows are written
/// unchanged; only the labels of the slots differ from the parent.
pub fn emit_transfer_bundle(
    mapping: &VocabMapping,
    embeddings: &EmbeddingMatrix,
    child_corpus: &Corpus,
    out_dir: impl AsRef<Path>,
    format: EmbeddingFormat,
) -> Result<BundlePaths> {
    if embeddings.rows() != mapping.len() {
        return Err(Error::Shape {
            expected: mapping.len(),
            found: embeddings.rows(),
        });
    }
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let paths = BundlePaths {
        vocab: out_dir.join("vocab.txt"),
        embeddings: out_dir.join(format!("embeddings.{}", format.extension())),
        mapping: out_dir.join("mapping.tsv"),
        unused_parent: out_dir.join("unused_parent.tsv"),
    };
    mapping.vocabulary().save(&paths.vocab)?;
    embeddings.save(&paths.embeddings, format)?;
    fs::write(&paths.mapping, mapping.to_tsv()).map_err(|e| Error::io(&paths.mapping, e))?;

    let mut unused = String::from("slot\tparent\n");
    for slot in unused_parent_slots(mapping, child_corpus) {
        let e = &mapping.entries[slot];
        unused.push_str(&tsv::row([slot.to_string().as_str(), &e.parent_token]));
        unused.push('\n');
    }
    fs::write(&paths.unused_parent, unused).map_err(|e| Error::io(&paths.unused_parent, e))?;
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::{remap_vocab, Variant};
    use crate::wordpiece::Vocabulary;

    fn toy() -> VocabMapping {
        let p = Vocabulary::from_tokens(["a", "b", "c", "d"]).unwrap();
        let c = Vocabulary::from_tokens(["b", "x", "a", "y"]).unwrap();
        remap_vocab(&p, &c, Variant::Frequency, None).unwrap()
    }

    fn matrix() -> EmbeddingMatrix {
        EmbeddingMatrix::new(4, 2, vec![0.5, -1.0, 0.25, 3.0, 1e-8, 7.0, -0.125, 2.5]).unwrap()
    }

    #[test]
    fn unused_parent_on_toy_corpus() {
        let child = Corpus::from_lines(["x y"]).unwrap();
        assert_eq!(unused_parent_slots(&toy(), &child), [0, 1]);
    }

    #[test]
    fn bundle_files() {
        let dir = tempfile::tempdir().unwrap();
        let child = Corpus::from_lines(["x y"]).unwrap();
        let paths = emit_transfer_bundle(&toy(), &matrix(), &child, dir.path(), EmbeddingFormat::Tsv).unwrap();
        assert_eq!(fs::read_to_string(&paths.vocab).unwrap(), "a\nb\nx\ny\n");
        assert_eq!(
            fs::read_to_string(&paths.unused_parent).unwrap(),
            "slot\tparent\n0\ta\n1\tb\n"
        );
        let reloaded = EmbeddingMatrix::load(&paths.embeddings, EmbeddingFormat::Tsv).unwrap();
        assert_eq!(reloaded, matrix());
    }

    #[test]
    fn identity_mapping_keeps_matrix_bytes() {
        let p = Vocabulary::from_tokens(["a", "b", "c", "d"]).unwrap();
        let m = remap_vocab(&p, &p, Variant::Frequency, None).unwrap();
        let dir = tempfile::tempdir().unwrap();
        for format in [EmbeddingFormat::Tsv, EmbeddingFormat::Binary] {
            let input = dir.path().join(format!("in.{}", format.extension()));
            matrix().save(&input, format).unwrap();
            let loaded = EmbeddingMatrix::load(&input, format).unwrap();
            let out = dir.path().join(format.extension());
            let paths = emit_transfer_bundle(&m, &loaded, &Corpus::default(), &out, format).unwrap();
            assert_eq!(fs::read(&input).unwrap(), fs::read(&paths.embeddings).unwrap());
        }
    }

    #[test]
    fn row_mismatch_is_a_shape_error() {
        let m = EmbeddingMatrix::new(3, 1, vec![1.0, 2.0, 3.0]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let err = emit_transfer_bundle(&toy(), &m, &Corpus::default(), dir.path(), EmbeddingFormat::Tsv).unwrap_err();
        assert!(matches!(err, Error::Shape { expected: 4, found: 3 }));
    }

    #[test]
    fn binary_header_is_little_endian() {
        let b = matrix().to_bytes(EmbeddingFormat::Binary);
        assert_eq!(&b[..8], &[4, 0, 0, 0, 2, 0, 0, 0]);
        assert_eq!(b.len(), 8 + 8 * 4);
        assert!(EmbeddingMatrix::parse_binary(&b[..10], Path::new("m")).is_err());
    }

    #[test]
    fn ragged_tsv_is_rejected() {
        assert!(EmbeddingMatrix::parse_tsv("1\t2\n3\n", Path::new("m")).is_err());
    }
}

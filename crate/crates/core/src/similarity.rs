//! Probability-based predicate similarity and the clustering matrix.
//!
//! Level-1 pairs (predicates sharing entities) score
//! `(|A∩B|/|A|) * (|A∩B|/|B|)`. Farther pairs take their score from an
//! intermediate predicate: the product of the two legs at level 2, the
//! larger leg beyond that. When several intermediates qualify the maximum
//! is kept. Unreachable pairs score 0 and the diagonal is 1.
//!
//! The level > 2 rule is not monotone in distance: a level-3 pair can
//! outscore a level-2 pair whose two legs are both weak.

use std::collections::BTreeMap;
use std::io::{self, Read, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::matrix::Matrix;
use crate::rdf::TermId;
use crate::schema::{sorted_intersection_len, IncidenceIndex, LevelMatrix};

/// Leading bytes of the binary matrix cache.
pub const BINARY_MAGIC: &[u8; 8] = b"SEMCLCM1";

#[derive(Debug, Error)]
pub enum SimilarityError {
    #[error("predicate {0:?} is not in the incidence index")]
    UnknownPredicate(TermId),
    #[error("score map is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("score ({0}, {1}) is out of range")]
    OutOfRange(usize, usize),
    #[error("malformed matrix file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Level-1 score for two indexed predicates.
pub fn level1_similarity(
    pi: TermId,
    pj: TermId,
    index: &IncidenceIndex,
) -> Result<f64, SimilarityError> {
    let i = index
        .position(pi)
        .ok_or(SimilarityError::UnknownPredicate(pi))?;
    let j = index
        .position(pj)
        .ok_or(SimilarityError::UnknownPredicate(pj))?;
    Ok(level1_score(index, i, j))
}

/// Level-1 score by index position.
pub fn level1_score(index: &IncidenceIndex, i: usize, j: usize) -> f64 {
    let a = index.neighbors(i);
    let b = index.neighbors(j);
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let shared = sorted_intersection_len(a, b) as f64;
    (shared / a.len() as f64) * (shared / b.len() as f64)
}

/// Off-diagonal scores keyed by ordered position pairs; both orientations
/// of every reachable pair are present.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PairScores {
    pub n: usize,
    pub scores: BTreeMap<(usize, usize), f64>,
}

impl PairScores {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.scores.get(&(i, j)).copied().unwrap_or(0.0)
    }
}

/// Scores every reachable pair, stage by stage in increasing level so
/// that every leg an intermediate uses is already final.
pub fn propagate_similarity(levels: &LevelMatrix, index: &IncidenceIndex) -> PairScores {
    let n = index.len();
    assert_eq!(levels.len(), n, "level matrix does not match index");
    let mut ps = vec![0.0f64; n * n];

    let stage = |m: u32, ps: &[f64]| -> Vec<(usize, usize, f64)> {
        (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                (i + 1..n)
                    .filter(move |&j| levels.level(i, j) == Some(m))
                    .map(move |j| (i, j, score_at_level(levels, index, ps, n, i, j, m)))
            })
            .collect()
    };

    for m in 1..=levels.max_level() {
        for (i, j, s) in stage(m, &ps) {
            ps[i * n + j] = s;
            ps[j * n + i] = s;
        }
    }

    let mut scores = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && levels.reachable(i, j) {
                scores.insert((i, j), ps[i * n + j]);
            }
        }
    }
    PairScores { n, scores }
}

fn score_at_level(
    levels: &LevelMatrix,
    index: &IncidenceIndex,
    ps: &[f64],
    n: usize,
    i: usize,
    j: usize,
    m: u32,
) -> f64 {
    if m == 1 {
        return level1_score(index, i, j);
    }
    let mut best = 0.0f64;
    for k in 0..n {
        let (Some(p), Some(q)) = (levels.level(i, k), levels.level(k, j)) else {
            continue;
        };
        if p == 0 || q == 0 || p >= m || q >= m || p + q != m {
            continue;
        }
        let (left, right) = (ps[i * n + k], ps[k * n + j]);
        let candidate = if m == 2 { left * right } else { left.max(right) };
        best = best.max(candidate);
    }
    best
}

/// Symmetric similarity matrix with unit diagonal, rows labelled by
/// predicate IRI in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMatrix {
    labels: Vec<String>,
    values: Matrix,
}

/// Dense matrix from pair scores. Missing pairs are 0.
pub fn assemble_matrix(
    scores: &PairScores,
    labels: &[String],
) -> Result<SimilarityMatrix, SimilarityError> {
    let n = labels.len();
    let mut values = Matrix::zeros(n, n);
    for i in 0..n {
        values[(i, i)] = 1.0;
    }
    for (&(i, j), &s) in &scores.scores {
        if i >= n || j >= n || i == j || !(0.0..=1.0).contains(&s) {
            return Err(SimilarityError::OutOfRange(i, j));
        }
        match scores.scores.get(&(j, i)) {
            Some(&t) if t.to_bits() == s.to_bits() => {}
            _ => return Err(SimilarityError::Asymmetric(i, j)),
        }
        values[(i, j)] = s;
    }
    Ok(SimilarityMatrix {
        labels: labels.to_vec(),
        values,
    })
}

impl SimilarityMatrix {
    pub fn new(labels: Vec<String>, values: Matrix) -> Result<Self, SimilarityError> {
        let n = labels.len();
        if values.rows() != n || values.cols() != n {
            return Err(SimilarityError::Format(format!(
                "expected {n}x{n}, got {}x{}",
                values.rows(),
                values.cols()
            )));
        }
        for i in 0..n {
            if values[(i, i)] != 1.0 {
                return Err(SimilarityError::Format(format!("diagonal at {i} is not 1")));
            }
            for j in 0..n {
                let v = values[(i, j)];
                if !(0.0..=1.0).contains(&v) {
                    return Err(SimilarityError::OutOfRange(i, j));
                }
                if v.to_bits() != values[(j, i)].to_bits() {
                    return Err(SimilarityError::Asymmetric(i, j));
                }
            }
        }
        Ok(Self { labels, values })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    /// CSV with a header row and a leading column of predicate IRIs.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), SimilarityError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![String::new()];
        header.extend(self.labels.iter().cloned());
        w.write_record(&header)?;
        for (i, label) in self.labels.iter().enumerate() {
            let mut record = vec![label.clone()];
            record.extend(self.values.row(i).iter().map(|v| v.to_string()));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self, SimilarityError> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let labels: Vec<String> = r.headers()?.iter().skip(1).map(str::to_owned).collect();
        let n = labels.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, record) in r.records().enumerate() {
            let record = record?;
            if record.len() != n + 1 || record.get(0) != labels.get(i).map(String::as_str) {
                return Err(SimilarityError::Format(format!("row {i} does not match header")));
            }
            for cell in record.iter().skip(1) {
                data.push(
                    cell.parse::<f64>()
                        .map_err(|e| SimilarityError::Format(format!("row {i}: {e}")))?,
                );
            }
        }
        if data.len() != n * n {
            return Err(SimilarityError::Format("wrong number of rows".into()));
        }
        Self::new(labels, Matrix::from_vec(n, n, data))
    }

    /// Binary layout: magic, `n` as little-endian u64, then `n*n`
    /// little-endian f64 values row by row.
    pub fn write_binary<W: Write>(&self, mut out: W) -> io::Result<()> {
        out.write_all(BINARY_MAGIC)?;
        out.write_all(&(self.len() as u64).to_le_bytes())?;
        for v in self.values.as_slice() {
            out.write_all(&v.to_le_bytes())?;
        }
        out.flush()
    }

    /// Reads the binary layout; row labels come from the caller.
    pub fn read_binary<R: Read>(mut input: R, labels: Vec<String>) -> Result<Self, SimilarityError> {
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        if bytes.len() < 16 || &bytes[..8] != BINARY_MAGIC {
            return Err(SimilarityError::Format("bad magic".into()));
        }
        let n = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
        if n != labels.len() {
            return Err(SimilarityError::Format(format!(
                "matrix has {n} rows, expected {}",
                labels.len()
            )));
        }
        let body = &bytes[16..];
        if body.len() != n * n * 8 {
            return Err(SimilarityError::Format("truncated matrix body".into()));
        }
        let data = body
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Self::new(labels, Matrix::from_vec(n, n, data))
    }
}

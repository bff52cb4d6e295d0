//! Predicate–entity incidence, the predicate projection graph and
//! pairwise neighbour levels.

mod incidence;
mod levels;
mod projection;

use std::io::{self, Write};

pub use incidence::{build_incidence, IncidenceIndex};
pub use levels::{neighbor_levels, reachable, LevelMatrix, DEFAULT_LMAX, UNBOUNDED};
pub use projection::{project_predicates, PredicateProjection, ProjectionEdge};

pub(crate) use incidence::sorted_intersection_len;

/// Writes `pi,pj,shared_count,level` for every reachable pair `pi < pj`.
pub fn write_projection_csv<W: Write>(
    index: &IncidenceIndex,
    projection: &PredicateProjection,
    levels: &LevelMatrix,
    out: W,
) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["pi", "pj", "shared_count", "level"])?;
    let n = index.len();
    for i in 0..n {
        for j in i + 1..n {
            if let Some(level) = levels.level(i, j) {
                w.write_record([
                    index.label(i),
                    index.label(j),
                    &projection.shared_count(i, j).to_string(),
                    &level.to_string(),
                ])?;
            }
        }
    }
    w.flush()
}

/// Graphviz rendering of the projection, edges labelled by shared count.
pub fn write_projection_dot<W: Write>(
    index: &IncidenceIndex,
    projection: &PredicateProjection,
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "graph projection {{")?;
    writeln!(out, "  node [shape=ellipse];")?;
    for i in 0..index.len() {
        writeln!(out, "  n{i} [label=\"{}\"];", dot_escape(index.label(i)))?;
    }
    for e in projection.edges() {
        writeln!(out, "  n{} -- n{} [label=\"{}\"];", e.a, e.b, e.shared)?;
    }
    writeln!(out, "}}")
}

pub(crate) fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

//! Independent reference computations used by the verification suite and the
//! tests: exact boundary distances for box unions (via exposed-face
//! enumeration, a different path from the signed-distance certificates), and
//! brute-force quadrature for `Tr S^2`.

use crate::geometry::{faces_of, AxisBox, BoxUnion, Interval};
use crate::quad::composite_gauss;
use crate::{Error, Result};

/// An exposed piece of the boundary of a box union in dimension <= 2:
/// either a point (d = 1) or an axis-parallel segment (d = 2).
#[derive(Debug, Clone)]
enum BoundaryPiece {
    Point(f64),
    /// Segment at `pos` along `axis`, spanning `span` on the other axis.
    Segment { axis: usize, pos: f64, span: Interval },
}

fn exposed_pieces(u: &BoxUnion) -> Result<Vec<BoundaryPiece>> {
    let d = u.dim();
    if d > 2 {
        return Err(Error::Domain(
            "exact boundary enumeration implemented for d <= 2".into(),
        ));
    }
    let faces = faces_of(u);
    let mut pieces = Vec::new();
    for (i, f) in faces.iter().enumerate() {
        if d == 1 {
            let covered = faces.iter().enumerate().any(|(j, g)| {
                j != i && g.orientation != f.orientation && g.pos == f.pos
            });
            if !covered {
                pieces.push(BoundaryPiece::Point(f.pos));
            }
        } else {
            // Subtract the covered sub-intervals from the cross-section.
            let mut remaining = vec![f.cross[0]];
            for (j, g) in faces.iter().enumerate() {
                if j == i || g.axis != f.axis || g.orientation == f.orientation || g.pos != f.pos
                {
                    continue;
                }
                let cover = g.cross[0];
                let mut next = Vec::with_capacity(remaining.len() + 1);
                for seg in remaining {
                    if cover.hi <= seg.lo || cover.lo >= seg.hi {
                        next.push(seg);
                        continue;
                    }
                    if cover.lo > seg.lo {
                        next.push(Interval { lo: seg.lo, hi: cover.lo });
                    }
                    if cover.hi < seg.hi {
                        next.push(Interval { lo: cover.hi, hi: seg.hi });
                    }
                }
                remaining = next;
            }
            for span in remaining {
                if span.length() > 0.0 {
                    pieces.push(BoundaryPiece::Segment {
                        axis: f.axis,
                        pos: f.pos,
                        span,
                    });
                }
            }
        }
    }
    Ok(pieces)
}

fn point_to_piece(piece: &BoundaryPiece, p: &[f64]) -> f64 {
    match piece {
        BoundaryPiece::Point(pos) => (p[0] - pos).abs(),
        BoundaryPiece::Segment { axis, pos, span } => {
            let along = p[1 - axis];
            let across = (p[*axis] - pos).abs();
            let gap = (span.lo - along).max(along - span.hi).max(0.0);
            (across * across + gap * gap).sqrt()
        }
    }
}

fn box_to_piece(piece: &BoundaryPiece, q: &AxisBox) -> f64 {
    let s = q.sides();
    match piece {
        BoundaryPiece::Point(pos) => (s[0].lo - pos).max(pos - s[0].hi).max(0.0),
        BoundaryPiece::Segment { axis, pos, span } => {
            let across_side = s[*axis];
            let along_side = s[1 - axis];
            let across = (across_side.lo - pos).max(pos - across_side.hi).max(0.0);
            let along = (along_side.lo - span.hi).max(span.lo - along_side.hi).max(0.0);
            (across * across + along * along).sqrt()
        }
    }
}

/// Exact distance from `p` to the boundary of the union (d <= 2).
pub fn distance_to_boundary(u: &BoxUnion, p: &[f64]) -> Result<f64> {
    let pieces = exposed_pieces(u)?;
    Ok(pieces
        .iter()
        .map(|piece| point_to_piece(piece, p))
        .fold(f64::INFINITY, f64::min))
}

/// Exact distance from a box `q` (assumed inside the union) to the
/// complement of the union, i.e. to the exposed boundary (d <= 2).
pub fn boundary_distance_to_box(u: &BoxUnion, q: &AxisBox) -> Result<f64> {
    let pieces = exposed_pieces(u)?;
    Ok(pieces
        .iter()
        .map(|piece| box_to_piece(piece, q))
        .fold(f64::INFINITY, f64::min))
}

/// A region whose oracle is the exact signed distance to the union's
/// boundary (d <= 2): positive values equal the true distance to the
/// complement, so Whitney decompositions of glued unions do not over-refine
/// along internal interfaces the way the max-of-boxes lower bound does.
pub fn exact_region(u: &BoxUnion) -> Result<crate::geometry::Region> {
    let pieces = exposed_pieces(u)?;
    let union = u.clone();
    Ok(crate::geometry::Region::from_fn(
        u.bounding_box(),
        move |p| {
            let d = pieces
                .iter()
                .map(|piece| point_to_piece(piece, p))
                .fold(f64::INFINITY, f64::min);
            if union.contains(p) {
                d
            } else {
                -d
            }
        },
    ))
}

/// Brute-force `Tr S^2` for `A = [0, c]`, `B` an interval of length 1
/// centred at the origin: composite 2-D tensor quadrature of
/// `sin^2(pi (x - y)) / (pi (x - y))^2` over `[0, c]^2`.
pub fn trs2_brute_quadrature(c: f64) -> f64 {
    let sinc2 = |t: f64| {
        if t.abs() < 1e-8 {
            1.0 - (std::f64::consts::PI * t).powi(2) / 3.0
        } else {
            let s = (std::f64::consts::PI * t).sin() / (std::f64::consts::PI * t);
            s * s
        }
    };
    let panels = (c.ceil() as usize).max(1) * 2;
    composite_gauss(
        |x| composite_gauss(|y| sinc2(x - y), 0.0, c, panels, 16),
        0.0,
        c,
        panels,
        16,
    )
}

//! The pebble order relation and the window of a pebble.
//!
//! `p ≻ q` ("p is bigger than q") when `s(p) - s(q)` exceeds the clockwise
//! distance from `p` to `q`. Such a pair has to swap during any routing that
//! realizes the disbursement; incomparable pairs never need to.

use crate::cycle::d_plus;
use crate::disbursement::SpinState;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderVerdict {
    Bigger,
    Smaller,
    Incomparable,
}

/// `p ≻ q` without range checks.
#[inline]
pub fn is_bigger(state: &SpinState, p: usize, q: usize) -> bool {
    let d = d_plus(state.position(p), state.position(q), state.n()) as i32;
    state.spin(p) - state.spin(q) > d
}

pub fn compare(state: &SpinState, p: usize, q: usize) -> Result<OrderVerdict> {
    let n = state.n();
    for x in [p, q] {
        if x == 0 || x > n {
            return Err(Error::PebbleOutOfRange { pebble: x, n });
        }
    }
    if p == q {
        return Err(Error::SamePebble(p));
    }
    Ok(if is_bigger(state, p, q) {
        OrderVerdict::Bigger
    } else if is_bigger(state, q, p) {
        OrderVerdict::Smaller
    } else {
        OrderVerdict::Incomparable
    })
}

/// Pebbles bigger than `p`, in clockwise order starting after `p`.
pub fn bigger_than(state: &SpinState, p: usize) -> Vec<usize> {
    clockwise_from(state, p).filter(|&q| is_bigger(state, q, p)).collect()
}

/// Pebbles smaller than `p`, in clockwise order starting after `p`.
pub fn smaller_than(state: &SpinState, p: usize) -> Vec<usize> {
    clockwise_from(state, p).filter(|&q| is_bigger(state, p, q)).collect()
}

/// The other pebbles in clockwise order, starting with the one after `p`.
pub fn clockwise_from(state: &SpinState, p: usize) -> impl Iterator<Item = usize> + '_ {
    let n = state.n();
    let start = state.position(p);
    (1..n).map(move |k| state.pebble_at((start - 1 + k) % n + 1))
}

/// The initial window around an anchor pebble `A`:
/// `(U_k, Y_k, …, U_1, Y_1, A, X_1, W_1, …, X_l, W_l)` in clockwise order,
/// with everything else in `outside` (the set `Z`).
///
/// `U` holds the pebbles bigger than `A`, `W` the smaller ones, and `X`, `Y`
/// the incomparable pebbles enclosed by them. `Y_1` and `X_1` may be empty;
/// every other segment is nonempty. All segments are listed clockwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowDecomposition {
    pub anchor: usize,
    /// `U_1, …, U_k`, nearest to the anchor first.
    pub u_segments: Vec<Vec<usize>>,
    /// `Y_1, …, Y_k`, where `Y_i` lies between `U_i` and `U_{i-1}` (or `A`).
    pub y_segments: Vec<Vec<usize>>,
    /// `X_1, …, X_l`, where `X_j` lies between `W_{j-1}` (or `A`) and `W_j`.
    pub x_segments: Vec<Vec<usize>>,
    /// `W_1, …, W_l`, nearest to the anchor first.
    pub w_segments: Vec<Vec<usize>>,
    /// `Z`, clockwise from just after `W_l`.
    pub outside: Vec<usize>,
    pub n: usize,
}

impl WindowDecomposition {
    /// `|win(A)|`.
    pub fn size(&self) -> usize {
        self.n - self.outside.len()
    }

    /// `O`, the number of pebbles outside the window.
    pub fn outside_count(&self) -> usize {
        self.outside.len()
    }

    pub fn u_all(&self) -> Vec<usize> {
        self.u_segments.iter().flatten().copied().collect()
    }

    pub fn w_all(&self) -> Vec<usize> {
        self.w_segments.iter().flatten().copied().collect()
    }

    pub fn x_all(&self) -> Vec<usize> {
        self.x_segments.iter().flatten().copied().collect()
    }

    pub fn y_all(&self) -> Vec<usize> {
        self.y_segments.iter().flatten().copied().collect()
    }

    /// All window pebbles in clockwise order from `U_k` to `W_l`.
    pub fn clockwise(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.size());
        for i in (0..self.u_segments.len()).rev() {
            out.extend(&self.u_segments[i]);
            out.extend(&self.y_segments[i]);
        }
        out.push(self.anchor);
        for j in 0..self.w_segments.len() {
            out.extend(&self.x_segments[j]);
            out.extend(&self.w_segments[j]);
        }
        out
    }

    pub fn is_degenerate(&self) -> bool {
        self.u_segments.is_empty() && self.w_segments.is_empty()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Up,
    Down,
    Level,
}

/// Builds the window of `anchor`. The state must be a minimized cycle state.
pub fn window(state: &SpinState, anchor: usize) -> Result<WindowDecomposition> {
    let n = state.n();
    if !state.topology().is_cycle() {
        return Err(Error::UnsupportedTopology(format!(
            "windows are defined on cycles, got {}",
            state.topology()
        )));
    }
    if anchor == 0 || anchor > n {
        return Err(Error::PebbleOutOfRange { pebble: anchor, n });
    }
    if !state.is_minimized() {
        return Err(Error::NotMinimized { spread: state.spread(), n });
    }
    let ring: Vec<usize> = clockwise_from(state, anchor).collect();
    let sides: Vec<Side> = ring
        .iter()
        .map(|&q| {
            if is_bigger(state, q, anchor) {
                Side::Up
            } else if is_bigger(state, anchor, q) {
                Side::Down
            } else {
                Side::Level
            }
        })
        .collect();
    let last_down = sides.iter().rposition(|&s| s == Side::Down);
    let first_up = sides.iter().position(|&s| s == Side::Up);
    if let (Some(d), Some(u)) = (last_down, first_up) {
        if d > u {
            return Err(Error::StructureViolation(format!(
                "bigger and smaller pebbles of {anchor} interleave"
            )));
        }
    }

    let cw_end = last_down.map_or(0, |d| d + 1);
    let ccw_start = first_up.unwrap_or(ring.len());

    let (x_segments, w_segments) = split_runs(&ring[..cw_end], &sides[..cw_end], Side::Down);
    let ccw: Vec<usize> = ring[ccw_start..].iter().rev().copied().collect();
    let ccw_sides: Vec<Side> = sides[ccw_start..].iter().rev().copied().collect();
    let (mut y_segments, mut u_segments) = split_runs(&ccw, &ccw_sides, Side::Up);
    for seg in y_segments.iter_mut().chain(u_segments.iter_mut()) {
        seg.reverse();
    }

    Ok(WindowDecomposition {
        anchor,
        u_segments,
        y_segments,
        x_segments,
        w_segments,
        outside: ring[cw_end..ccw_start].to_vec(),
        n,
    })
}

/// Splits a run that starts next to the anchor into alternating
/// (incomparable, comparable) segment pairs; the first incomparable segment
/// may be empty. Pebbles on the wrong side are a structure violation caught
/// by the caller's interleaving check, so they are treated as incomparable.
fn split_runs(pebbles: &[usize], sides: &[Side], comparable: Side) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut level = Vec::new();
    let mut cmp = Vec::new();
    let mut cur_level = Vec::new();
    let mut cur_cmp: Vec<usize> = Vec::new();
    for (&p, &s) in pebbles.iter().zip(sides) {
        if s == comparable {
            cur_cmp.push(p);
        } else {
            if !cur_cmp.is_empty() {
                level.push(std::mem::take(&mut cur_level));
                cmp.push(std::mem::take(&mut cur_cmp));
            }
            cur_level.push(p);
        }
    }
    if !cur_cmp.is_empty() {
        level.push(cur_level);
        cmp.push(cur_cmp);
    }
    (level, cmp)
}

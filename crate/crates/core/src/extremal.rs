//! Extremal windows and their block structure.
//!
//! A permutation whose routing takes `n - 1` rounds must have an anchor
//! pebble whose window takes one of a few shapes. [`classify_extremal`]
//! finds every such anchor over every minimized disbursement, and
//! [`block_decompose`] splits the window segments into isolated, head and
//! tail blocks and checks the order relations that the shape forces.

use std::collections::BTreeSet;
use std::fmt;

use crate::cycle::{dihedral, dihedral_inverse, Permutation, Topology};
use crate::disbursement::{enumerate_minimized_with_bound, SpinState, DEFAULT_ENUMERATION_BOUND};
use crate::error::{Error, Result};
use crate::order::{is_bigger, window, WindowDecomposition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtremalKind {
    /// `|win| = n`, `(A, X, W)`.
    Type1,
    /// `|win| = n - 1`, `(U, A, X, W)` with `U` and `W` nonempty.
    Type2,
    /// `|win| = n - 1`, `(A, X, W)`.
    Type2a,
    /// `|win| = n`, `(A, X_1, W_1, x, W_2)`.
    Type3a,
    /// `|win| = n`, `(A, X_1, w, X_2, W_2)`.
    Type3b,
}

impl ExtremalKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExtremalKind::Type1 => "type1",
            ExtremalKind::Type2 => "type2",
            ExtremalKind::Type2a => "type2a",
            ExtremalKind::Type3a => "type3a",
            ExtremalKind::Type3b => "type3b",
        }
    }
}

impl fmt::Display for ExtremalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One extremal window: its shape, the anchor, and the minimized
/// disbursement it was found under. `mirrored` marks shapes found on the
/// reflected permutation; anchor and disbursement are always given in the
/// labels of the original permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtremalClass {
    pub kind: ExtremalKind,
    pub mirrored: bool,
    pub anchor: usize,
    pub disbursement: Vec<i32>,
}

impl ExtremalClass {
    /// The same class expressed on the reflected permutation, where it is unmirrored.
    pub fn reflected(&self) -> ExtremalClass {
        let n = self.disbursement.len();
        ExtremalClass {
            kind: self.kind,
            mirrored: !self.mirrored,
            anchor: dihedral(self.anchor, n, 0, true),
            disbursement: reflect_spins(&self.disbursement),
        }
    }
}

/// Spins after the reflection `v ↦ 2 - v`: pebble `g(p)` gets `-s(p)`.
pub fn reflect_spins(spins: &[i32]) -> Vec<i32> {
    let n = spins.len();
    let mut out = vec![0; n];
    for p in 1..=n {
        out[dihedral(p, n, 0, true) - 1] = -spins[p - 1];
    }
    out
}

/// Shapes matched by an unmirrored window.
pub fn match_kinds(win: &WindowDecomposition) -> Vec<ExtremalKind> {
    let mut out = Vec::new();
    if win.is_degenerate() {
        return out;
    }
    let o = win.outside_count();
    let k = win.u_segments.len();
    let l = win.w_segments.len();
    if o == 0 && k == 0 && l == 1 {
        out.push(ExtremalKind::Type1);
    }
    if o == 1 && k == 1 && win.y_segments[0].is_empty() && l == 1 {
        out.push(ExtremalKind::Type2);
    }
    if o == 1 && k == 0 && l == 1 {
        out.push(ExtremalKind::Type2a);
    }
    if o == 0 && k == 0 && l == 2 {
        if win.x_segments[1].len() == 1 {
            out.push(ExtremalKind::Type3a);
        }
        if win.w_segments[0].len() == 1 {
            out.push(ExtremalKind::Type3b);
        }
    }
    out
}

/// Every extremal window of `π` over all minimized disbursements and all
/// anchors, unmirrored shapes first. Empty when there is none.
pub fn classify_extremal(pi: &Permutation) -> Result<Vec<ExtremalClass>> {
    let mut out = direct_classes(pi)?;
    let reflected = pi.relabel(0, true);
    let n = pi.n();
    for c in direct_classes(&reflected)? {
        out.push(ExtremalClass {
            kind: c.kind,
            mirrored: true,
            anchor: dihedral_inverse(c.anchor, n, 0, true),
            disbursement: reflect_spins(&c.disbursement),
        });
    }
    Ok(out)
}

fn direct_classes(pi: &Permutation) -> Result<Vec<ExtremalClass>> {
    let n = pi.n();
    let topology = Topology::cycle(n)?;
    let mut out = Vec::new();
    for spins in enumerate_minimized_with_bound(pi, DEFAULT_ENUMERATION_BOUND)? {
        let state = SpinState::new(topology, pi, spins)?;
        for anchor in 1..=n {
            let win = window(&state, anchor)?;
            for kind in match_kinds(&win) {
                out.push(ExtremalClass { kind, mirrored: false, anchor, disbursement: state.spins().to_vec() });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SegmentLabel {
    U(usize),
    Y(usize),
    X(usize),
    W(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockKind {
    /// No relation among the members.
    Isolated,
    /// The first member is bigger than every other; nothing else.
    Head(usize),
    /// Every member is bigger than the last; nothing else.
    Tail(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub segment: SegmentLabel,
    pub pebbles: Vec<usize>,
    pub kind: BlockKind,
}

/// Blocks of a classified window in clockwise order, together with the
/// distinguished outside pebble (`z`, or the singleton `x` / `w` of the
/// third shapes) and the constant `c` that sizes its block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub kind: ExtremalKind,
    pub blocks: Vec<Block>,
    pub distinguished: Option<usize>,
    pub c: Option<i32>,
}

impl BlockDecomposition {
    pub fn blocks_in(&self, segment: SegmentLabel) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(move |b| b.segment == segment)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Scan from the clockwise end (the `W` side).
    FromEnd,
    /// Scan from the clockwise start (the `X` side).
    FromStart,
}

/// Kind of a consecutive run, read off its relations; `None` if the run
/// is not a block at all.
fn block_kind(state: &SpinState, pebbles: &[usize]) -> Option<BlockKind> {
    let rel = |p: usize, q: usize| is_bigger(state, p, q);
    let any = pebbles.iter().any(|&p| pebbles.iter().any(|&q| rel(p, q)));
    if !any {
        return Some(BlockKind::Isolated);
    }
    let only = |f: &dyn Fn(usize, usize) -> bool| {
        pebbles.iter().all(|&p| pebbles.iter().all(|&q| p == q || rel(p, q) == f(p, q)))
    };
    let first = pebbles[0];
    let last = *pebbles.last().unwrap();
    if only(&|p, _| p == first) {
        return Some(BlockKind::Head(first));
    }
    if only(&|_, q| q == last) {
        return Some(BlockKind::Tail(last));
    }
    None
}

/// Greedy split of `seg` (clockwise order) into blocks. Starting from the
/// scan end, a pebble related to something further along opens a block up
/// to its farthest partner; otherwise it joins an isolated run, which is cut
/// wherever the relation to `external` changes.
fn decompose_segment(
    state: &SpinState,
    seg: &[usize],
    label: SegmentLabel,
    mode: Mode,
    external: Option<usize>,
) -> Result<Vec<Block>> {
    let related = |a: usize, b: usize| is_bigger(state, a, b) || is_bigger(state, b, a);
    let sig = |p: usize| external.map(|e| (is_bigger(state, e, p), is_bigger(state, p, e)));
    let ord: Vec<usize> = match mode {
        Mode::FromStart => seg.to_vec(),
        Mode::FromEnd => seg.iter().rev().copied().collect(),
    };
    let opens = |i: usize| (i + 1..ord.len()).rev().find(|&k| related(ord[i], ord[k]));

    let mut runs: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < ord.len() {
        if let Some(k) = opens(i) {
            runs.push(ord[i..=k].to_vec());
            i = k + 1;
            continue;
        }
        let mut k = i;
        while k + 1 < ord.len() && opens(k + 1).is_none() && sig(ord[k + 1]) == sig(ord[i]) {
            k += 1;
        }
        runs.push(ord[i..=k].to_vec());
        i = k + 1;
    }
    if mode == Mode::FromEnd {
        runs.reverse();
        runs.iter_mut().for_each(|r| r.reverse());
    }
    runs.into_iter()
        .map(|pebbles| {
            let kind = block_kind(state, &pebbles)
                .ok_or_else(|| violation(format!("{label:?}: {pebbles:?} is not a block")))?;
            Ok(Block { segment: label, pebbles, kind })
        })
        .collect()
}

fn violation(msg: impl Into<String>) -> Error {
    Error::StructureViolation(msg.into())
}

fn check_block_internals(state: &SpinState, b: &Block) -> Result<()> {
    for &p in &b.pebbles {
        for &q in &b.pebbles {
            if p == q {
                continue;
            }
            let expected = match b.kind {
                BlockKind::Isolated => false,
                BlockKind::Head(h) => p == h,
                BlockKind::Tail(t) => q == t,
            };
            if is_bigger(state, p, q) != expected {
                return Err(violation(format!(
                    "block {:?} of {:?}: relation {p} ≻ {q} is {}",
                    b.pebbles,
                    b.segment,
                    !expected
                )));
            }
        }
    }
    Ok(())
}

fn single_isolated(blocks: &[Block], what: &str) -> Result<()> {
    match blocks {
        [] => Ok(()),
        [b] if b.kind == BlockKind::Isolated => Ok(()),
        _ => Err(violation(format!("{what} is not one isolated block: {blocks:?}"))),
    }
}

fn no_kind(blocks: &[Block], forbidden: fn(&BlockKind) -> bool, what: &str) -> Result<()> {
    if blocks.iter().any(|b| forbidden(&b.kind)) {
        return Err(violation(format!("{what} has a block of the wrong orientation: {blocks:?}")));
    }
    Ok(())
}

fn is_tail(k: &BlockKind) -> bool {
    matches!(k, BlockKind::Tail(_))
}

/// The block containing the distinguished pebble's partners: it must be
/// isolated, have `size` members, and each must relate to `e` as given.
fn check_sized_block(state: &SpinState, block: Option<&Block>, size: usize, e: usize, e_bigger: bool) -> Result<Vec<usize>> {
    let b = block.ok_or_else(|| violation(format!("missing block of {size} pebbles next to {e}")))?;
    if b.kind != BlockKind::Isolated || b.pebbles.len() != size {
        return Err(violation(format!("expected an isolated block of {size} around {e}, got {b:?}")));
    }
    for &p in &b.pebbles {
        let ok = if e_bigger { is_bigger(state, e, p) } else { is_bigger(state, p, e) };
        if !ok {
            return Err(violation(format!("pebble {p} of {:?} does not relate to {e}", b.pebbles)));
        }
    }
    Ok(b.pebbles.clone())
}

type Pairs = BTreeSet<(usize, usize)>;

fn all_pairs(big: &[usize], small: &[usize]) -> Pairs {
    big.iter().flat_map(|&a| small.iter().map(move |&b| (a, b))).collect()
}

/// Decomposes the window of a classified anchor into blocks and verifies
/// the order relations the shape forces. The window must be unmirrored.
pub fn block_decompose(state: &SpinState, win: &WindowDecomposition, kind: ExtremalKind) -> Result<BlockDecomposition> {
    if !match_kinds(win).contains(&kind) {
        return Err(Error::ClassMismatch(format!("window of {} is not {kind}", win.anchor)));
    }
    let a = win.anchor;
    let mut required = Pairs::new();
    let mut blocks = Vec::new();
    let mut distinguished = None;
    let mut c = None;

    match kind {
        ExtremalKind::Type1 => {
            let x = &win.x_segments[0];
            let w = &win.w_segments[0];
            let xb = decompose_segment(state, x, SegmentLabel::X(1), Mode::FromStart, None)?;
            let wb = decompose_segment(state, w, SegmentLabel::W(1), Mode::FromEnd, None)?;
            single_isolated(&xb, "X")?;
            single_isolated(&wb, "W")?;
            let mut top = vec![a];
            top.extend(x);
            required.extend(all_pairs(&top, w));
            blocks.extend(xb);
            blocks.extend(wb);
        }
        ExtremalKind::Type2 => {
            let z = win.outside[0];
            let u = &win.u_segments[0];
            let x = &win.x_segments[0];
            let w = &win.w_segments[0];
            let ub = decompose_segment(state, u, SegmentLabel::U(1), Mode::FromEnd, None)?;
            let xb = decompose_segment(state, x, SegmentLabel::X(1), Mode::FromStart, Some(z))?;
            let wb = decompose_segment(state, w, SegmentLabel::W(1), Mode::FromEnd, None)?;
            single_isolated(&ub, "U")?;
            single_isolated(&wb, "W")?;
            let cz = state.spin(z);
            if cz > 0 {
                return Err(violation(format!("s(z) = {cz} > 0")));
            }
            if cz < 0 {
                let x0 = check_sized_block(state, xb.last(), (-cz) as usize, z, false)?;
                required.extend(all_pairs(&x0, &[z]));
            }
            let mut top = u.clone();
            top.push(a);
            top.extend(x);
            required.extend(all_pairs(u, &[a]));
            required.extend(all_pairs(&top, w));
            distinguished = Some(z);
            c = Some(cz);
            blocks.extend(ub);
            blocks.extend(xb);
            blocks.extend(wb);
        }
        ExtremalKind::Type2a => {
            let z = win.outside[0];
            let x = &win.x_segments[0];
            let w = &win.w_segments[0];
            let cz = state.spin(z);
            let xb = decompose_segment(state, x, SegmentLabel::X(1), Mode::FromStart, Some(z))?;
            let wb = decompose_segment(state, w, SegmentLabel::W(1), Mode::FromEnd, Some(z))?;
            no_kind(&wb, is_tail, "W")?;
            if cz > 0 {
                single_isolated(&xb, "X")?;
                let w0 = check_sized_block(state, wb.first(), cz as usize, z, true)?;
                required.extend(all_pairs(&[z], &w0));
            } else if cz < 0 {
                single_isolated(&wb, "W")?;
                let x0 = check_sized_block(state, xb.last(), (-cz) as usize, z, false)?;
                required.extend(all_pairs(&x0, &[z]));
            } else if single_isolated(&xb, "X").is_err() && single_isolated(&wb, "W").is_err() {
                return Err(violation("s(z) = 0 but neither X nor W is isolated"));
            }
            let mut top = vec![a];
            top.extend(x);
            required.extend(all_pairs(&top, w));
            distinguished = Some(z);
            c = Some(cz);
            blocks.extend(xb);
            blocks.extend(wb);
        }
        ExtremalKind::Type3a => {
            let x1 = &win.x_segments[0];
            let w1 = &win.w_segments[0];
            let xs = win.x_segments[1][0];
            let w2 = &win.w_segments[1];
            let x1b = decompose_segment(state, x1, SegmentLabel::X(1), Mode::FromStart, None)?;
            let w1b = decompose_segment(state, w1, SegmentLabel::W(1), Mode::FromEnd, Some(xs))?;
            let w2b = decompose_segment(state, w2, SegmentLabel::W(2), Mode::FromEnd, None)?;
            single_isolated(&x1b, "X_1")?;
            single_isolated(&w2b, "W_2")?;
            no_kind(&w1b, is_tail, "W_1")?;
            let cx = state.spin(xs) - w2.len() as i32;
            if cx < 0 {
                return Err(violation(format!("c = s(x) - |W_2| = {cx} < 0")));
            }
            if cx > 0 {
                let w0 = check_sized_block(state, w1b.first(), cx as usize, xs, true)?;
                required.extend(all_pairs(&[xs], &w0));
            }
            let mut top = vec![a];
            top.extend(x1);
            let mut bottom = w1.clone();
            bottom.extend(w2);
            required.extend(all_pairs(&top, &bottom));
            required.extend(all_pairs(&[xs], w2));
            distinguished = Some(xs);
            c = Some(cx);
            blocks.extend(x1b);
            blocks.extend(w1b);
            blocks.push(Block { segment: SegmentLabel::X(2), pebbles: vec![xs], kind: BlockKind::Isolated });
            blocks.extend(w2b);
        }
        ExtremalKind::Type3b => {
            let x1 = &win.x_segments[0];
            let ws = win.w_segments[0][0];
            let x2 = &win.x_segments[1];
            let w2 = &win.w_segments[1];
            let x1b = decompose_segment(state, x1, SegmentLabel::X(1), Mode::FromStart, None)?;
            let x2b = decompose_segment(state, x2, SegmentLabel::X(2), Mode::FromStart, Some(ws))?;
            let w2b = decompose_segment(state, w2, SegmentLabel::W(2), Mode::FromEnd, None)?;
            single_isolated(&x1b, "X_1")?;
            single_isolated(&w2b, "W_2")?;
            let cw = state.spin(ws) + 1 + x1.len() as i32;
            if cw > 0 {
                return Err(violation(format!("c = s(w) + 1 + |X_1| = {cw} > 0")));
            }
            if cw < 0 {
                let x0 = check_sized_block(state, x2b.last(), (-cw) as usize, ws, false)?;
                required.extend(all_pairs(&x0, &[ws]));
            }
            let mut top = vec![a];
            top.extend(x1);
            let mut bottom = vec![ws];
            bottom.extend(w2);
            required.extend(all_pairs(&top, &bottom));
            required.extend(all_pairs(x2, w2));
            distinguished = Some(ws);
            c = Some(cw);
            blocks.extend(x1b);
            blocks.push(Block { segment: SegmentLabel::W(1), pebbles: vec![ws], kind: BlockKind::Isolated });
            blocks.extend(x2b);
            blocks.extend(w2b);
        }
    }

    let mut allowed = required.clone();
    for b in &blocks {
        check_block_internals(state, b)?;
        match b.kind {
            BlockKind::Isolated => {}
            BlockKind::Head(h) => allowed.extend(b.pebbles.iter().filter(|&&p| p != h).map(|&p| (h, p))),
            BlockKind::Tail(t) => allowed.extend(b.pebbles.iter().filter(|&&p| p != t).map(|&p| (p, t))),
        }
    }
    for &(p, q) in &required {
        if !is_bigger(state, p, q) {
            return Err(violation(format!("{kind}: expected {p} ≻ {q}")));
        }
    }
    let n = state.n();
    for p in 1..=n {
        for q in 1..=n {
            if p != q && is_bigger(state, p, q) && !allowed.contains(&(p, q)) {
                return Err(violation(format!("{kind}: unexpected relation {p} ≻ {q}")));
            }
        }
    }
    Ok(BlockDecomposition { kind, blocks, distinguished, c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::window;

    fn cycle_state(pi: &Permutation, spins: Vec<i32>) -> SpinState {
        SpinState::new(Topology::cycle(pi.n()).unwrap(), pi, spins).unwrap()
    }

    #[test]
    fn rotation_has_type1_anchor() {
        let rot = Permutation::rotation(6, 1);
        let classes = classify_extremal(&rot).unwrap();
        let st = cycle_state(&rot, vec![5, -1, -1, -1, -1, -1]);
        assert!(classes.iter().any(|c| c.kind == ExtremalKind::Type1
            && !c.mirrored
            && c.anchor == 1
            && c.disbursement == st.spins()));
        let win = window(&st, 1).unwrap();
        let blocks = block_decompose(&st, &win, ExtremalKind::Type1).unwrap();
        assert_eq!(blocks.blocks.len(), 1);
        assert_eq!(blocks.blocks[0].pebbles, vec![2, 3, 4, 5, 6]);
        assert_eq!(blocks.blocks[0].kind, BlockKind::Isolated);
    }

    #[test]
    fn identity_has_no_extremal_window() {
        assert!(classify_extremal(&Permutation::identity(6)).unwrap().is_empty());
    }

    #[test]
    fn mirrored_classes_use_original_labels() {
        let rot = Permutation::rotation(6, -1);
        for c in classify_extremal(&rot).unwrap() {
            let pi = if c.mirrored { rot.relabel(0, true) } else { rot.clone() };
            let class = if c.mirrored { c.reflected() } else { c.clone() };
            let st = cycle_state(&pi, class.disbursement.clone());
            let win = window(&st, class.anchor).unwrap();
            assert!(match_kinds(&win).contains(&c.kind));
        }
    }
}

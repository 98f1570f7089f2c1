//! Finite-scale symbolic dynamics: pointed configurations inside a
//! materialized window, expected-occurrence structure, the level labeling
//! functions, and replacement maps.
//!
//! A point of the subshift is modeled as an anchor inside `v_N`: every
//! query the overlap bounds need is visible in such a window, and anything
//! outside it is an error rather than an extrapolation.

use crate::error::{Error, Result};
use crate::generate::GeneratingSequence;
use crate::words::{decompose, FiniteWord};

/// A point of the subshift, modeled as position `offset` of `v_level`
/// sitting at coordinate 0.
#[derive(Debug, Clone, Copy)]
pub struct PointedConfig<'a> {
    gen: &'a GeneratingSequence,
    level: usize,
    offset: usize,
}

/// The level label: the index of the expected occurrence containing the
/// anchor within its enclosing block, or `Spacer` when the anchor falls
/// between occurrences at this level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Copy(u32),
    Spacer,
}

impl Label {
    pub fn index(self) -> Option<u32> {
        match self {
            Label::Copy(i) => Some(i),
            Label::Spacer => None,
        }
    }
}

/// The edge-vs-interior classification derived from [`Label`]: `Left` for
/// the first copy, `Right` for the last, `Interior` between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kappa {
    Left,
    Interior,
    Right,
    Spacer,
}

/// Labels for every level below the window level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelVector {
    pub lambdas: Vec<Label>,
    pub kappas: Vec<Kappa>,
}

/// Copy index and start position of the expected occurrence containing a
/// position, per level.
#[derive(Debug, Clone, Copy)]
struct Slot {
    index: u32,
    start: usize,
}

impl<'a> PointedConfig<'a> {
    pub fn new(gen: &'a GeneratingSequence, level: usize, offset: usize) -> Result<Self> {
        if level > gen.depth() {
            return Err(Error::LevelOutOfRange {
                level,
                max: gen.depth(),
            });
        }
        let len = gen.height(level);
        if offset < 1 || offset > len {
            return Err(Error::OutOfWindow {
                offset: offset as i64,
                len,
            });
        }
        Ok(PointedConfig { gen, level, offset })
    }

    pub fn gen(&self) -> &'a GeneratingSequence {
        self.gen
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    /// The anchor moved by `delta` coordinates, staying inside the window.
    pub fn shifted(&self, delta: i64) -> Result<Self> {
        let target = self.offset as i64 + delta;
        let len = self.gen.height(self.level);
        if target < 1 || target > len as i64 {
            return Err(Error::OutOfWindow {
                offset: target,
                len,
            });
        }
        PointedConfig::new(self.gen, self.level, target as usize)
    }

    /// Point coordinate of window position `p` (the anchor is coordinate 0).
    fn coord(&self, p: usize) -> i64 {
        p as i64 - self.offset as i64
    }

    /// Descend through the expected-occurrence structure, recording for each
    /// level below `self.level` the copy containing the anchor. A spacer at
    /// some level puts every lower level in a spacer too.
    fn descend(&self) -> Vec<Option<Slot>> {
        let spec = self.gen.spec();
        let mut slots: Vec<Option<Slot>> = vec![None; self.level];
        let mut block_start = 1usize;
        for k in (0..self.level).rev() {
            let stage = spec.stage(k).expect("materialized levels have stages");
            let h = self.gen.height(k);
            let mut start = block_start;
            let mut found = None;
            for i in 1..=stage.r {
                if self.offset < start {
                    break; // anchor sits in the gap before this copy
                }
                if self.offset < start + h {
                    found = Some(Slot { index: i, start });
                    break;
                }
                if i < stage.r {
                    start += h + stage.spacer.letter(i as usize) as usize;
                }
            }
            match found {
                Some(slot) => {
                    slots[k] = Some(slot);
                    block_start = slot.start;
                }
                None => break, // lower levels stay None
            }
        }
        slots
    }

    /// Start position (window coordinates) of the expected occurrence of
    /// `v_n` containing the anchor, or `None` when the anchor is in a spacer
    /// at level `n`.
    pub fn occurrence_start(&self, n: usize) -> Result<Option<usize>> {
        if n >= self.level {
            if n == self.level {
                return Ok(Some(1));
            }
            return Err(Error::LevelOutOfRange {
                level: n,
                max: self.level,
            });
        }
        Ok(self.descend()[n].map(|slot| slot.start))
    }
}

/// Positions of the expected occurrences of `v_m` inside `v_n`, by the
/// stage recursion. These are the demonstrated copies, not substring
/// matches; there are exactly `∏_{j=m}^{n-1} r_j` of them.
pub fn expected_positions(gen: &GeneratingSequence, m: usize, n: usize) -> Result<Vec<usize>> {
    if n > gen.depth() || m >= n {
        return Err(Error::LevelOutOfRange {
            level: n,
            max: gen.depth(),
        });
    }
    let spec = gen.spec();
    let mut positions = vec![1usize];
    for k in (m..n).rev() {
        let stage = spec.stage(k).expect("materialized levels have stages");
        let h = gen.height(k);
        let mut refined = Vec::with_capacity(positions.len() * stage.r as usize);
        for &block in &positions {
            let mut start = block;
            for i in 1..=stage.r {
                refined.push(start);
                if i < stage.r {
                    start += h + stage.spacer.letter(i as usize) as usize;
                }
            }
        }
        positions = refined;
    }
    Ok(positions)
}

/// The pair `(λ_n, κ_n)` of the configuration: which expected copy of `v_n`
/// inside its enclosing `v_{n+1}` block contains the anchor.
pub fn label(config: &PointedConfig<'_>, n: usize) -> Result<(Label, Kappa)> {
    if n + 1 > config.level {
        return Err(Error::LevelOutOfRange {
            level: n + 1,
            max: config.level,
        });
    }
    let slots = config.descend();
    Ok(slot_labels(config, &slots, n))
}

fn slot_labels(config: &PointedConfig<'_>, slots: &[Option<Slot>], n: usize) -> (Label, Kappa) {
    match slots[n] {
        None => (Label::Spacer, Kappa::Spacer),
        Some(slot) => {
            let r = config
                .gen
                .spec()
                .stage(n)
                .expect("materialized levels have stages")
                .r;
            let kappa = if slot.index == 1 {
                Kappa::Left
            } else if slot.index == r {
                Kappa::Right
            } else {
                Kappa::Interior
            };
            (Label::Copy(slot.index), kappa)
        }
    }
}

/// All labels `λ_0 .. λ_{N-1}` and `κ_0 .. κ_{N-1}` in one descent.
pub fn label_vector(config: &PointedConfig<'_>) -> LabelVector {
    let slots = config.descend();
    let mut lambdas = Vec::with_capacity(config.level);
    let mut kappas = Vec::with_capacity(config.level);
    for n in 0..config.level {
        let (l, k) = slot_labels(config, &slots, n);
        lambdas.push(l);
        kappas.push(k);
    }
    LabelVector { lambdas, kappas }
}

/// The closed interval of overlap, in point coordinates, between the
/// expected occurrences of `v_n` containing the two anchors. `None` when
/// the occurrences do not intersect.
///
/// Both anchors must lie inside expected occurrences of `v_n`.
pub fn overlap_interval(
    cx: &PointedConfig<'_>,
    cy: &PointedConfig<'_>,
    n: usize,
) -> Result<Option<(i64, i64)>> {
    let sx = cx
        .occurrence_start(n)?
        .ok_or(Error::NotInExpectedOccurrence)?;
    let sy = cy
        .occurrence_start(n)?
        .ok_or(Error::NotInExpectedOccurrence)?;
    let h = cx.gen.height(n) as i64;
    let (ax, bx) = (cx.coord(sx), cx.coord(sx) + h - 1);
    let (ay, by) = (cy.coord(sy), cy.coord(sy) + h - 1);
    let lo = ax.max(ay);
    let hi = bx.min(by);
    Ok(if lo <= hi { Some((lo, hi)) } else { None })
}

/// Apply a replacement scheme `(v, w)`: the image configuration lives in the
/// target window, with every expected occurrence of `v` replaced by `w` at
/// the same positions.
///
/// The scheme is validated inside the visible windows: `v` must build the
/// source window, `w` the target window, with equal lengths and coinciding
/// expected positions as far as both windows reach.
pub fn replace<'t>(
    config: &PointedConfig<'_>,
    v: &FiniteWord,
    w: &FiniteWord,
    target: &'t GeneratingSequence,
) -> Result<PointedConfig<'t>> {
    let source_word = config.gen.word(config.level);
    let target_level = target.depth();
    let target_word = target.word(target_level);
    if v.len() != w.len() {
        return Err(Error::SchemeInvalid {
            reason: format!(
                "replacement words have different lengths ({} vs {})",
                v.len(),
                w.len()
            ),
        });
    }
    let dv = decompose(source_word, v)?.ok_or_else(|| Error::SchemeInvalid {
        reason: "first word does not build the source window".into(),
    })?;
    let dw = decompose(target_word, w)?.ok_or_else(|| Error::SchemeInvalid {
        reason: "second word does not build the target window".into(),
    })?;
    let common = dv.positions().len().min(dw.positions().len());
    if dv.positions()[..common] != dw.positions()[..common] {
        return Err(Error::SchemeInvalid {
            reason: "expected-occurrence positions differ inside the common window".into(),
        });
    }
    // with equal lengths and coinciding positions the coordinate of every
    // cell is preserved; only the letters inside the copies change
    PointedConfig::new(target, target_level, config.offset)
}

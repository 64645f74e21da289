//! Moving-disc image sequences on the space-time grid.

use rand::Rng;

use crate::error::{Error, Result};
use crate::experiments::data::mask_labels;
use crate::graph::grid_index;
use crate::sampler::LabelData;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PixelState {
    Background,
    Object,
    Unobserved,
}

/// Observed frames; pixel `(t, r, c)` is grid vertex `grid_index(width, height, t, r, c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageStack {
    pub width: usize,
    pub height: usize,
    pub frames: usize,
    pub states: Vec<PixelState>,
}

impl ImageStack {
    pub fn index(&self, t: usize, r: usize, c: usize) -> usize {
        grid_index(self.width, self.height, t, r, c)
    }

    pub fn frame_len(&self) -> usize {
        self.width * self.height
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackingSpec {
    pub width: usize,
    pub height: usize,
    pub frames: usize,
    pub unobserved_frac: f64,
    /// 0-based frame receiving the spurious disc.
    pub corrupt_frame: Option<usize>,
    /// Defaults to 10% of `min(width, height)`.
    pub radius: Option<f64>,
    /// Defaults to the object radius.
    pub spurious_radius: Option<f64>,
    /// Fraction of the corner-to-corner diagonal covered over the sequence.
    pub travel: f64,
}

impl TrackingSpec {
    pub fn new(width: usize, height: usize, frames: usize) -> Self {
        TrackingSpec {
            width,
            height,
            frames,
            unobserved_frac: 0.1,
            corrupt_frame: None,
            radius: None,
            spurious_radius: None,
            travel: 1.0,
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
            .unwrap_or(0.1 * self.width.min(self.height) as f64)
    }

    pub fn spurious_radius(&self) -> f64 {
        self.spurious_radius.unwrap_or_else(|| self.radius())
    }

    /// Disc centre `(row, col)` in frame `t`. The disc starts touching the
    /// top-left corner and moves linearly towards the bottom-right one,
    /// reaching it in the last frame when `travel = 1`.
    pub fn center(&self, t: usize) -> (f64, f64) {
        let r = self.radius();
        let s = if self.frames > 1 {
            self.travel * t as f64 / (self.frames - 1) as f64
        } else {
            0.0
        };
        let end_r = self.height as f64 - 1.0 - r;
        let end_c = self.width as f64 - 1.0 - r;
        (r + s * (end_r - r), r + s * (end_c - r))
    }

    fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 || self.frames == 0 {
            return Err(Error::invalid("image dimensions must be positive"));
        }
        if !(0.0..=1.0).contains(&self.travel) {
            return Err(Error::invalid(format!(
                "travel {} not in [0, 1]",
                self.travel
            )));
        }
        if !(0.0..1.0).contains(&self.unobserved_frac) {
            return Err(Error::invalid(format!(
                "unobserved fraction {} not in [0, 1)",
                self.unobserved_frac
            )));
        }
        let fits = |r: f64| r > 0.0 && 2.0 * r <= self.width.min(self.height) as f64 - 1.0;
        if !fits(self.radius()) {
            return Err(Error::invalid(format!(
                "disc of radius {} does not fit a {}x{} frame",
                self.radius(),
                self.width,
                self.height
            )));
        }
        if let Some(f) = self.corrupt_frame {
            if f >= self.frames {
                return Err(Error::invalid(format!(
                    "corrupt frame {f} out of range for {} frames",
                    self.frames
                )));
            }
            if !fits(self.spurious_radius()) {
                return Err(Error::invalid(format!(
                    "spurious disc of radius {} does not fit the frame",
                    self.spurious_radius()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackingData {
    pub stack: ImageStack,
    /// True object indicator per vertex, without the spurious disc.
    pub truth: Vec<u8>,
    pub data: LabelData,
    pub hidden: Vec<usize>,
    /// Background vertices covered by the spurious disc.
    pub spurious: Vec<usize>,
}

fn in_disc(r: usize, c: usize, center: (f64, f64), radius: f64) -> bool {
    let dr = r as f64 - center.0;
    let dc = c as f64 - center.1;
    dr * dr + dc * dc <= radius * radius
}

pub fn gen_tracking<R: Rng + ?Sized>(spec: &TrackingSpec, rng: &mut R) -> Result<TrackingData> {
    spec.validate()?;
    let (w, h, nt) = (spec.width, spec.height, spec.frames);
    let n = w * h * nt;
    let radius = spec.radius();
    let mut truth = vec![0u8; n];
    for t in 0..nt {
        let center = spec.center(t);
        for r in 0..h {
            for c in 0..w {
                if in_disc(r, c, center, radius) {
                    truth[grid_index(w, h, t, r, c)] = 1;
                }
            }
        }
    }
    let mut spurious = Vec::new();
    if let Some(t) = spec.corrupt_frame {
        let sr = spec.spurious_radius();
        let center = (sr, w as f64 - 1.0 - sr);
        for r in 0..h {
            for c in 0..w {
                let v = grid_index(w, h, t, r, c);
                if in_disc(r, c, center, sr) && truth[v] == 0 {
                    spurious.push(v);
                }
            }
        }
        spurious.sort_unstable();
    }
    let mut seen = truth.clone();
    for &v in &spurious {
        seen[v] = 1;
    }
    let masked = mask_labels(&seen, 1.0 - spec.unobserved_frac, rng)?;
    let states = (0..n)
        .map(|v| match masked.data.label(v) {
            None => PixelState::Unobserved,
            Some(true) => PixelState::Object,
            Some(false) => PixelState::Background,
        })
        .collect();
    Ok(TrackingData {
        stack: ImageStack {
            width: w,
            height: h,
            frames: nt,
            states,
        },
        truth,
        data: masked.data,
        hidden: masked.hidden,
        spurious,
    })
}

/// Pixels with a 4-neighbour of the other class in the same frame.
pub fn boundary_mask(truth: &[u8], width: usize, height: usize, frames: usize) -> Vec<bool> {
    let mut out = vec![false; truth.len()];
    for t in 0..frames {
        for r in 0..height {
            for c in 0..width {
                let v = grid_index(width, height, t, r, c);
                let mut nb = Vec::with_capacity(4);
                if r > 0 {
                    nb.push(grid_index(width, height, t, r - 1, c));
                }
                if r + 1 < height {
                    nb.push(grid_index(width, height, t, r + 1, c));
                }
                if c > 0 {
                    nb.push(grid_index(width, height, t, r, c - 1));
                }
                if c + 1 < width {
                    nb.push(grid_index(width, height, t, r, c + 1));
                }
                out[v] = nb.iter().any(|&u| truth[u] != truth[v]);
            }
        }
    }
    out
}

/// Intersection over union of the positive sets.
pub fn iou(pred: &[u8], truth: &[u8]) -> f64 {
    let inter = pred
        .iter()
        .zip(truth)
        .filter(|(p, t)| **p == 1 && **t == 1)
        .count();
    let union = pred
        .iter()
        .zip(truth)
        .filter(|(p, t)| **p == 1 || **t == 1)
        .count();
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn geometry_and_indexing() {
        let mut spec = TrackingSpec::new(20, 20, 5);
        spec.corrupt_frame = Some(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = gen_tracking(&spec, &mut rng).unwrap();
        assert_eq!(d.truth.len(), 2000);
        assert_eq!(d.hidden.len(), 200);
        assert_eq!(spec.center(0), (2.0, 2.0));
        assert_eq!(spec.center(4), (17.0, 17.0));
        assert_eq!(d.truth[d.stack.index(0, 2, 2)], 1);
        assert_eq!(d.truth[d.stack.index(4, 17, 17)], 1);
        assert_eq!(d.truth[d.stack.index(0, 17, 17)], 0);
        assert!(!d.spurious.is_empty());
        for &v in &d.spurious {
            assert_eq!(d.truth[v], 0);
            assert_eq!(v / 400, 2);
            if let Some(y) = d.data.label(v) {
                assert!(y);
            }
        }
        for v in 0..2000 {
            match d.stack.states[v] {
                PixelState::Unobserved => assert!(d.data.label(v).is_none()),
                PixelState::Object => assert_eq!(d.data.label(v), Some(true)),
                PixelState::Background => assert_eq!(d.data.label(v), Some(false)),
            }
        }
    }

    #[test]
    fn fully_observed_and_errors() {
        let mut spec = TrackingSpec::new(10, 8, 3);
        spec.unobserved_frac = 0.0;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let d = gen_tracking(&spec, &mut rng).unwrap();
        assert!(d.hidden.is_empty() && d.spurious.is_empty());
        spec.radius = Some(4.0);
        assert!(gen_tracking(&spec, &mut rng).is_err());
        spec.radius = None;
        spec.corrupt_frame = Some(3);
        assert!(gen_tracking(&spec, &mut rng).is_err());
        assert!(gen_tracking(&TrackingSpec::new(0, 5, 1), &mut rng).is_err());
    }

    #[test]
    fn boundary_and_iou() {
        // 1x3 frame: 0 1 1
        let b = boundary_mask(&[0, 1, 1], 3, 1, 1);
        assert_eq!(b, vec![true, true, false]);
        assert_eq!(iou(&[1, 1, 0], &[0, 1, 1]), 1.0 / 3.0);
        assert_eq!(iou(&[0, 0], &[0, 0]), 1.0);
    }
}

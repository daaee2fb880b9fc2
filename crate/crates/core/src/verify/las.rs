use crate::error::{Error, Result};
use crate::numerics::{sample_standard_normal, RngStream};
use crate::priors::LatentVector;

/// The four attribute-combination groups for one attribute pair (A, B).
/// Upper case means the attribute is present.
#[derive(Debug, Clone, Default)]
pub struct AttributeGroups {
    /// `[A,B]`
    pub both: Vec<LatentVector>,
    /// `[a,B]`
    pub only_b: Vec<LatentVector>,
    /// `[a,b]`
    pub neither: Vec<LatentVector>,
    /// `[A,b]`
    pub only_a: Vec<LatentVector>,
}

impl AttributeGroups {
    fn named(&self) -> [(&'static str, &[LatentVector]); 4] {
        [
            ("[A,B]", &self.both),
            ("[a,B]", &self.only_b),
            ("[a,b]", &self.neither),
            ("[A,b]", &self.only_a),
        ]
    }

    fn all(&self) -> impl Iterator<Item = &LatentVector> {
        self.both
            .iter()
            .chain(&self.only_b)
            .chain(&self.neither)
            .chain(&self.only_a)
    }
}

/// Which vectors define the normalizing mean squared norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LasNormalization {
    /// One mean over every vector used across all pairs.
    #[default]
    Global,
    /// Each pair normalized by the mean over its own four groups.
    PerPair,
}

fn group_mean(vs: &[LatentVector], dim: usize) -> Vec<f64> {
    let mut m = vec![0.0; dim];
    for v in vs {
        for (acc, x) in m.iter_mut().zip(v.as_slice()) {
            *acc += x;
        }
    }
    let n = vs.len() as f64;
    m.iter_mut().for_each(|x| *x /= n);
    m
}

fn mean_sq_norm<'a>(vs: impl Iterator<Item = &'a LatentVector>) -> f64 {
    let (sum, count) = vs.fold((0.0, 0usize), |(s, c), v| (s + v.norm_sq(), c + 1));
    sum / count as f64
}

/// Latent algebra score: the average over attribute pairs of
/// `‖z̄[A,B] − z̄[a,B] + z̄[a,b] − z̄[A,b]‖² / m`, with `m` the mean squared
/// norm of the vectors used. Lower is better.
pub fn latent_algebra_score(
    groups_per_pair: &[AttributeGroups],
    n_attributes: usize,
    normalization: LasNormalization,
) -> Result<f64> {
    if n_attributes < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least two attributes, got {n_attributes}"
        )));
    }
    let n_pairs = n_attributes * (n_attributes - 1) / 2;
    if groups_per_pair.len() != n_pairs {
        return Err(Error::MissingGroup(format!(
            "{n_attributes} attributes need {n_pairs} pairs, got {}",
            groups_per_pair.len()
        )));
    }
    let mut dim = None;
    for (p, g) in groups_per_pair.iter().enumerate() {
        for (name, vs) in g.named() {
            if vs.is_empty() {
                return Err(Error::MissingGroup(format!("pair {p}: group {name} is empty")));
            }
            for v in vs {
                let expected = *dim.get_or_insert(v.dim());
                if v.dim() != expected {
                    return Err(Error::DimensionMismatch {
                        expected,
                        actual: v.dim(),
                    });
                }
            }
        }
    }
    let dim = dim.expect("at least one non-empty group");
    let global_m = mean_sq_norm(groups_per_pair.iter().flat_map(|g| g.all()));

    let mut total = 0.0;
    for g in groups_per_pair {
        let ab = group_mean(&g.both, dim);
        let a_b = group_mean(&g.only_b, dim);
        let nn = group_mean(&g.neither, dim);
        let a_only = group_mean(&g.only_a, dim);
        let defect: f64 = (0..dim)
            .map(|i| {
                let e = ab[i] - a_b[i] + nn[i] - a_only[i];
                e * e
            })
            .sum();
        let m = match normalization {
            LasNormalization::Global => global_m,
            LasNormalization::PerPair => mean_sq_norm(g.all()),
        };
        total += defect / m;
    }
    Ok(total / n_pairs as f64)
}

/// Groups from an exactly additive attribute model:
/// `z = base + [A]·u_A + [B]·u_B + ε`, `ε ~ N(0, noise² I)`.
///
/// `base` and the attribute directions `u_k` are standard-normal draws shared
/// by every vector, so any defect comes from the noise alone.
pub fn synthetic_attribute_groups(
    n_attributes: usize,
    dim: usize,
    per_group: usize,
    noise: f64,
    rng: &mut RngStream,
) -> Result<Vec<AttributeGroups>> {
    if n_attributes < 2 || dim == 0 || per_group == 0 {
        return Err(Error::InvalidParameter(
            "synthetic groups need ≥2 attributes, dim ≥1 and non-empty groups".into(),
        ));
    }
    let draw = |rng: &mut RngStream| -> Vec<f64> {
        (0..dim).map(|_| sample_standard_normal(rng)).collect()
    };
    let base = draw(rng);
    let dirs: Vec<Vec<f64>> = (0..n_attributes).map(|_| draw(rng)).collect();

    let mut out = Vec::with_capacity(n_attributes * (n_attributes - 1) / 2);
    for a in 0..n_attributes {
        for b in (a + 1)..n_attributes {
            let make = |has_a: bool, has_b: bool, rng: &mut RngStream| -> Vec<LatentVector> {
                (0..per_group)
                    .map(|_| {
                        let z: Vec<f64> = (0..dim)
                            .map(|i| {
                                let mut x = base[i] + noise * sample_standard_normal(rng);
                                if has_a {
                                    x += dirs[a][i];
                                }
                                if has_b {
                                    x += dirs[b][i];
                                }
                                x
                            })
                            .collect();
                        LatentVector::from_vec_unchecked(z)
                    })
                    .collect()
            };
            out.push(AttributeGroups {
                both: make(true, true, rng),
                only_b: make(false, true, rng),
                neither: make(false, false, rng),
                only_a: make(true, false, rng),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(xs: &[f64]) -> LatentVector {
        LatentVector::new(xs.to_vec()).unwrap()
    }

    fn parallelogram() -> AttributeGroups {
        // [A,B] − [a,B] + [a,b] − [A,b] = 0 with A shift (1,0), B shift (0,2)
        AttributeGroups {
            both: vec![lv(&[1.5, 3.0]), lv(&[0.5, 1.0])],
            only_b: vec![lv(&[0.0, 2.0])],
            neither: vec![lv(&[-0.5, 0.5]), lv(&[0.5, -0.5])],
            only_a: vec![lv(&[1.0, 0.0])],
        }
    }

    #[test]
    fn parallelogram_scores_zero() {
        let s = latent_algebra_score(&[parallelogram()], 2, LasNormalization::Global).unwrap();
        assert!(s.abs() < 1e-12);
    }

    #[test]
    fn hand_computed_defect() {
        let mut g = parallelogram();
        g.only_a = vec![lv(&[2.0, 0.0])];
        // moving [A,b] to (2, 0) leaves a defect of (−1, 0)
        let vs: Vec<&LatentVector> = g.all().collect();
        let m = vs.iter().map(|v| v.norm_sq()).sum::<f64>() / vs.len() as f64;
        let s = latent_algebra_score(&[g], 2, LasNormalization::Global).unwrap();
        assert!((s - 1.0 / m).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            latent_algebra_score(&[parallelogram()], 3, LasNormalization::Global),
            Err(Error::MissingGroup(_))
        ));
        let mut g = parallelogram();
        g.neither.clear();
        assert!(matches!(
            latent_algebra_score(&[g], 2, LasNormalization::Global),
            Err(Error::MissingGroup(_))
        ));
        let mut g = parallelogram();
        g.only_a.push(lv(&[1.0, 2.0, 3.0]));
        assert!(matches!(
            latent_algebra_score(&[g], 2, LasNormalization::Global),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn synthetic_construction_scores_low() {
        let mut rng = RngStream::new(4, 0);
        let groups = synthetic_attribute_groups(4, 16, 256, 0.01, &mut rng).unwrap();
        assert_eq!(groups.len(), 6);
        for norm in [LasNormalization::Global, LasNormalization::PerPair] {
            let s = latent_algebra_score(&groups, 4, norm).unwrap();
            assert!(s < 1e-3, "{s}");
        }
    }
}

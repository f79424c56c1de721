//! Exact enumeration of the dichotomies `(H_{c1,c2}(K)(f_1), ..., H_{c1,c2}(K)(f_m))`
//! over all real `(c1, c2)`, shattering certificates and subset search.
//!
//! Rankings of the `nu_k` only change at profile breakpoints or where two
//! affine pieces cross, so probing every such point, one point inside every
//! gap between them and one point beyond each end sees every ranking.

use std::collections::{BTreeMap, BTreeSet};

use crate::classifier::{classify, Family, Label, Ranking};
use crate::error::{Error, Result};
use crate::gfunc::{GroupFunction, Measure};
use crate::orders::{is_complete, OrderSet};
use crate::scalar::{sort_dedup, Scalar};

/// Points where some ranking can change, plus the probes derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalSet<T> {
    pub points: Vec<T>,
    pub probes: Vec<T>,
}

fn critical_from_family<T: Scalar>(family: &Family<T>) -> CriticalSet<T> {
    let mut breaks: Vec<T> = family.profiles.iter().flat_map(|p| p.breakpoints.iter().cloned()).collect();
    sort_dedup(&mut breaks);

    let mut points = breaks.clone();
    // One representative per elementary interval to pick the affine piece.
    let mut reps = Vec::with_capacity(breaks.len() + 1);
    match (breaks.first(), breaks.last()) {
        (Some(lo), Some(hi)) => {
            reps.push((None, Some(lo.clone()), lo.clone() - T::one()));
            for w in breaks.windows(2) {
                let mid = (w[0].clone() + w[1].clone()) / T::from_int(2);
                reps.push((Some(w[0].clone()), Some(w[1].clone()), mid));
            }
            reps.push((Some(hi.clone()), None, hi.clone() + T::one()));
        }
        _ => reps.push((None, None, T::zero())),
    }
    let m = family.len();
    for (lo, hi, rep) in &reps {
        let pieces: Vec<(&T, &T)> = family.profiles.iter().map(|p| p.piece_at(rep)).collect();
        for i in 0..m {
            for j in i + 1..m {
                let (si, oi) = pieces[i];
                let (sj, oj) = pieces[j];
                if si == sj {
                    continue;
                }
                let c = (oj.clone() - oi.clone()) / (si.clone() - sj.clone());
                let inside = lo.as_ref().map_or(true, |l| &c > l) && hi.as_ref().map_or(true, |h| &c < h);
                if inside {
                    points.push(c);
                }
            }
        }
    }
    sort_dedup(&mut points);

    let mut probes = points.clone();
    match (points.first(), points.last()) {
        (Some(lo), Some(hi)) => {
            probes.push(lo.clone() - T::one());
            probes.push(hi.clone() + T::one());
            for w in points.windows(2) {
                probes.push((w[0].clone() + w[1].clone()) / T::from_int(2));
            }
        }
        _ => probes.push(T::zero()),
    }
    sort_dedup(&mut probes);
    CriticalSet { points, probes }
}

pub fn critical_points<T: Scalar>(
    kernel: &GroupFunction<T>,
    fs: &[GroupFunction<T>],
    mu: &Measure<T>,
) -> Result<CriticalSet<T>> {
    Ok(critical_from_family(&Family::new(kernel, fs, mu)?))
}

/// Labels for one dichotomy, `labels[k]` for function `k`.
pub type Dichotomy = Vec<Label>;

/// Bitmask of the functions labelled `+1`.
pub fn dichotomy_mask(labels: &[Label]) -> u64 {
    labels.iter().enumerate().filter(|(_, l)| **l == Label::Pos).fold(0, |acc, (k, _)| acc | 1 << k)
}

pub fn mask_dichotomy(mask: u64, m: usize) -> Dichotomy {
    (0..m).map(|k| if mask >> k & 1 == 1 { Label::Pos } else { Label::Neg }).collect()
}

/// Every threshold cut of `nus` with its `c2`: `+1` exactly on `nu > w` for
/// each distinct value `w`, plus the all-positive cut.
fn cuts<T: Scalar>(nus: &[T]) -> Vec<(u64, T)> {
    let mut levels = nus.to_vec();
    sort_dedup(&mut levels);
    let mut out = Vec::with_capacity(levels.len() + 1);
    let all = (0..nus.len()).fold(0u64, |acc, k| acc | 1 << k);
    out.push((all, T::one() - levels[0].clone()));
    for w in &levels {
        let mask = nus.iter().enumerate().filter(|(_, v)| *v > w).fold(0u64, |acc, (k, _)| acc | 1 << k);
        out.push((mask, -w.clone()));
    }
    out
}

fn dichotomies_of_family<T: Scalar>(family: &Family<T>) -> BTreeMap<u64, (T, T)> {
    let crit = critical_from_family(family);
    let mut found = BTreeMap::new();
    for c1 in &crit.probes {
        for (mask, c2) in cuts(&family.nu_values(c1)) {
            found.entry(mask).or_insert_with(|| (c1.clone(), c2));
        }
    }
    found
}

/// All realizable dichotomies, keyed by the mask of `+1` labels, each with
/// the first witness `(c1, c2)` found in increasing probe order.
pub fn enumerate_dichotomies<T: Scalar>(
    kernel: &GroupFunction<T>,
    fs: &[GroupFunction<T>],
    mu: &Measure<T>,
) -> Result<BTreeMap<u64, (T, T)>> {
    check_m(fs.len())?;
    Ok(dichotomies_of_family(&Family::new(kernel, fs, mu)?))
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::EmptyFamily);
    }
    if m > 63 {
        return Err(Error::InvalidArgument(format!("at most 63 functions supported, got {m}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateEntry<T> {
    pub labels: Dichotomy,
    pub witness: Option<(T, T)>,
}

/// One entry per dichotomy in mask order; witnessed ones carry `(c1, c2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShatterCertificate<T> {
    pub m: usize,
    pub entries: Vec<CertificateEntry<T>>,
    pub shattered: bool,
}

impl<T: Scalar> ShatterCertificate<T> {
    pub fn witnessed(&self) -> usize {
        self.entries.iter().filter(|e| e.witness.is_some()).count()
    }

    /// Re-checks every witness with [`classify`].
    pub fn verify(&self, kernel: &GroupFunction<T>, fs: &[GroupFunction<T>], mu: &Measure<T>) -> Result<()> {
        if fs.len() != self.m || self.entries.len() as u128 != 1u128 << self.m {
            return Err(Error::InvalidArgument("certificate does not match the function family".into()));
        }
        for e in &self.entries {
            if let Some((c1, c2)) = &e.witness {
                for (f, want) in fs.iter().zip(&e.labels) {
                    if classify(kernel, f, mu, c1, c2)? != *want {
                        return Err(Error::WitnessRejected { labels: e.labels.iter().map(|l| l.as_i8()).collect() });
                    }
                }
            }
        }
        if self.shattered != (self.witnessed() == self.entries.len()) {
            return Err(Error::InvalidArgument("shattered flag disagrees with the entries".into()));
        }
        Ok(())
    }
}

pub fn is_shattered<T: Scalar>(
    kernel: &GroupFunction<T>,
    fs: &[GroupFunction<T>],
    mu: &Measure<T>,
) -> Result<ShatterCertificate<T>> {
    let m = fs.len();
    check_m(m)?;
    if m > 24 {
        return Err(Error::InvalidArgument(format!("certificate for m = {m} would list 2^{m} dichotomies")));
    }
    let mut found = enumerate_dichotomies(kernel, fs, mu)?;
    let entries: Vec<CertificateEntry<T>> = (0..1u64 << m)
        .map(|mask| CertificateEntry { labels: mask_dichotomy(mask, m), witness: found.remove(&mask) })
        .collect();
    let shattered = entries.iter().all(|e| e.witness.is_some());
    let cert = ShatterCertificate { m, entries, shattered };
    cert.verify(kernel, fs, mu)?;
    Ok(cert)
}

/// `O(K)`: every ranking of the `nu_k` over `c`.
pub fn order_set<T: Scalar>(kernel: &GroupFunction<T>, fs: &[GroupFunction<T>], mu: &Measure<T>) -> Result<OrderSet> {
    check_m(fs.len())?;
    let family = Family::new(kernel, fs, mu)?;
    let crit = critical_from_family(&family);
    let set: BTreeSet<Ranking> = crit.probes.iter().map(|c| family.ranking(c)).collect();
    OrderSet::new(fs.len(), set.into_iter().collect())
}

/// Whether `O(K)` contains a complete set of orders.
pub fn check_order_criterion<T: Scalar>(
    kernel: &GroupFunction<T>,
    fs: &[GroupFunction<T>],
    mu: &Measure<T>,
) -> Result<bool> {
    Ok(is_complete(&order_set(kernel, fs, mu)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult<T> {
    /// Indices into the candidate list of the largest shattered subset found.
    pub best: Vec<usize>,
    pub certificate: Option<ShatterCertificate<T>>,
    pub subsets_checked: u64,
    /// Set when the budget ran out before the search finished.
    pub partial: bool,
}

impl<T> SearchResult<T> {
    pub fn size(&self) -> usize {
        self.best.len()
    }
}

/// Largest shattered subset of `candidates` with at most `m_cap` elements.
///
/// Sizes are tried in increasing order and subsets lexicographically; the
/// search stops at the first size where nothing is shattered, since subsets
/// of a shattered set are shattered. `budget` bounds the number of subsets
/// examined.
pub fn vc_search<T: Scalar>(
    kernel: &GroupFunction<T>,
    candidates: &[GroupFunction<T>],
    mu: &Measure<T>,
    m_cap: usize,
    budget: u64,
) -> Result<SearchResult<T>> {
    if candidates.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if m_cap > candidates.len() {
        return Err(Error::InvalidArgument(format!("m_cap {m_cap} exceeds {} candidates", candidates.len())));
    }
    let mut result = SearchResult { best: Vec::new(), certificate: None, subsets_checked: 0, partial: false };
    'sizes: for size in 1..=m_cap {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            if result.subsets_checked >= budget {
                result.partial = true;
                break 'sizes;
            }
            result.subsets_checked += 1;
            let fs: Vec<GroupFunction<T>> = combo.iter().map(|&i| candidates[i].clone()).collect();
            let cert = is_shattered(kernel, &fs, mu)?;
            if cert.shattered {
                result.best = combo.clone();
                result.certificate = Some(cert);
                continue 'sizes;
            }
            if !next_combination(&mut combo, candidates.len()) {
                break 'sizes;
            }
        }
    }
    Ok(result)
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

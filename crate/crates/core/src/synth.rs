//! Kernel synthesis: a kernel `K` and functions `u_2, u_4, ..., u_{2m}` such
//! that a prescribed set of orders appears among the rankings of the
//! `nu_k(c)`. With a complete set of orders this shatters the functions.
//!
//! All functions live in the span of `1_e` and `1_g`, so for a kernel `K`
//! and `u = a 1_e + b 1_g` the convolution is `(u*K)(h) = a K(h) + b K(g^-1 h)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::classifier::{Family, Ranking};
use crate::error::{Error, Result};
use crate::gfunc::{convolve, GroupFunction, Measure};
use crate::group::FiniteGroup;
use crate::orders::OrderSet;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthMode {
    /// `g` has order two; needs `|G| >= 2 r m`.
    OrderTwo,
    /// `g` and `g^2` differ from `e`; needs `|G| >= 9 r m`.
    General,
}

impl SynthMode {
    pub fn size_factor(self) -> u128 {
        match self {
            SynthMode::OrderTwo => 2,
            SynthMode::General => 9,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SynthMode::OrderTwo => "order_two",
            SynthMode::General => "general",
        }
    }
}

impl std::str::FromStr for SynthMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "order_two" => Ok(SynthMode::OrderTwo),
            "general" => Ok(SynthMode::General),
            _ => Err(Error::InvalidArgument(format!("unknown mode {s:?}"))),
        }
    }
}

/// Coefficients of `u_0 .. u_{2p+1}` in the basis `(1_e, 1_g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UTower<T> {
    pub b: T,
    pub c: T,
    pub p: usize,
    /// `epsilons[q-1]` is `eps_q` for `q` in `1..=p`.
    pub epsilons: Vec<T>,
    pub coeffs: Vec<(T, T)>,
}

pub fn build_u_tower<T: Scalar>(b: T, c: T, p: usize) -> Result<UTower<T>> {
    if !b.is_positive() || c <= b {
        return Err(Error::InvalidArgument("need C > B > 0".into()));
    }
    if p == 0 {
        return Err(Error::InvalidArgument("tower height p must be at least 1".into()));
    }
    let four = T::from_int(4);
    let epsilons: Vec<T> = (1..=p)
        .map(|i| {
            four.clone() * c.clone() / b.clone()
                + T::one()
                + T::from_int((p - i) as i64) * (b.clone() / c.clone() + T::one())
        })
        .collect();
    let mut coeffs = vec![(T::one(), T::zero()), (T::zero(), T::one())];
    for (q, eps) in (1..=p).zip(&epsilons) {
        let (a0, b0) = coeffs[2 * q - 2].clone();
        let (a1, b1) = coeffs[2 * q - 1].clone();
        let even = (eps.clone() * a0.clone() + a1.clone(), eps.clone() * b0.clone() + b1.clone());
        let odd = (a0 + eps.clone() * a1, b0 + eps.clone() * b1);
        coeffs.push(even);
        coeffs.push(odd);
    }
    Ok(UTower { b, c, p, epsilons, coeffs })
}

impl<T: Scalar> UTower<T> {
    /// `u~_i(k) = a_{i,1} k_1 + a_{i,2} k_2`.
    pub fn eval(&self, i: usize, k: &(T, T)) -> T {
        let (a, b) = &self.coeffs[i];
        a.clone() * k.0.clone() + b.clone() * k.1.clone()
    }

    /// `u_i` as a function on `group`.
    pub fn function(&self, group: &Arc<FiniteGroup>, g: usize, i: usize) -> Result<GroupFunction<T>> {
        group.check_element(g)?;
        if g == group.identity() {
            return Err(Error::InvalidArgument("g must differ from the identity".into()));
        }
        let mut f = GroupFunction::zero(group.clone());
        f.set(group.identity(), self.coeffs[i].0.clone())?;
        f.set(g, self.coeffs[i].1.clone())?;
        Ok(f)
    }
}

/// Kernel slice `k` with `u~_i(k) = A` and `u~_l(k) < B` for every other
/// `l` in `0..=2p+1`. `i` must be even and in `2..=2p`.
pub fn solve_k_vector<T: Scalar>(tower: &UTower<T>, i: usize, a: &T) -> Result<(T, T)> {
    if i % 2 != 0 || i < 2 || i > 2 * tower.p {
        return Err(Error::InvalidArgument(format!("index {i} is not an even number in 2..={}", 2 * tower.p)));
    }
    if *a <= tower.b || *a >= tower.c {
        return Err(Error::InvalidArgument(format!("target {a:?} outside the open interval (B, C)")));
    }
    let q = i / 2;
    let (p11, p12) = &tower.coeffs[i - 2];
    let (p21, p22) = &tower.coeffs[i - 1];
    let r1 = T::from_int(2) * a.clone() / tower.epsilons[q - 1].clone();
    let r2 = -a.clone();
    let det = p11.clone() * p22.clone() - p12.clone() * p21.clone();
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let k1 = (r1.clone() * p22.clone() - p12.clone() * r2.clone()) / det.clone();
    let k2 = (p11.clone() * r2 - r1 * p21.clone()) / det;
    let k = (k1, k2);
    if tower.eval(i, &k) != *a {
        return Err(Error::SynthVerification(format!("u~_{i}(k) differs from the target")));
    }
    for l in (0..tower.coeffs.len()).filter(|&l| l != i) {
        if tower.eval(l, &k) >= tower.b {
            return Err(Error::SynthVerification(format!("u~_{l}(k) is not below B for target index {i}")));
        }
    }
    Ok(k)
}

/// `eps = (C-B)(m-1) / (2m (m - 1 + m^{r+1} - 1))`.
/// Zero for `m < 2`.
pub fn epsilon<T: Scalar>(b: &T, c: &T, m: usize, r: usize) -> T {
    if m < 2 {
        return T::zero();
    }
    let mt = T::from_int(m as i64);
    let power = (0..=r).fold(T::one(), |acc, _| acc * mt.clone());
    let one = T::one();
    let numer = (c.clone() - b.clone()) * (mt.clone() - one.clone());
    let denom = T::from_int(2) * mt.clone() * (mt - one.clone() + power - one);
    numer / denom
}

fn check_mode_element(group: &FiniteGroup, g: usize, mode: SynthMode) -> Result<()> {
    group.check_element(g)?;
    let e = group.identity();
    let gg = group.mul(g, g);
    match mode {
        SynthMode::OrderTwo if g != e && gg == e => Ok(()),
        SynthMode::General if g != e && gg != e => Ok(()),
        SynthMode::OrderTwo => Err(Error::MissingElement(format!("element {g} does not have order two"))),
        SynthMode::General => Err(Error::MissingElement(format!("element {g} or its square is the identity"))),
    }
}

/// Greedy choice of `r` disjoint sets `H_l` of `m` elements each, smallest
/// admissible index first.
pub fn choose_subsets(group: &FiniteGroup, g: usize, r: usize, m: usize, mode: SynthMode) -> Result<Vec<Vec<usize>>> {
    check_mode_element(group, g, mode)?;
    let n = group.order();
    let required = mode.size_factor() * r as u128 * m as u128;
    let too_small = || Error::GroupTooSmall { required, actual: n };
    let mut blocked = vec![false; n];
    let mut subsets = Vec::with_capacity(r);
    let g_inv = group.inv(g);
    let mut next = 0;
    for _ in 0..r {
        let mut h_l = Vec::with_capacity(m);
        for _ in 0..m {
            let pick = (next..n).find(|&x| match mode {
                SynthMode::OrderTwo => !blocked[x] && !blocked[group.mul(g_inv, x)],
                SynthMode::General => !blocked[x],
            });
            let h = pick.ok_or_else(too_small)?;
            match mode {
                SynthMode::OrderTwo => {
                    blocked[h] = true;
                    blocked[group.mul(g_inv, h)] = true;
                }
                SynthMode::General => {
                    for k in -4..=4 {
                        blocked[group.mul(group.pow(g, k), h)] = true;
                    }
                }
            }
            next = h + 1;
            h_l.push(h);
        }
        subsets.push(h_l);
    }
    verify_subsets(group, g, &subsets, m, mode)?;
    Ok(subsets)
}

/// Exhaustive check of the disjointness conditions on the sets `H_l`.
pub fn verify_subsets(group: &FiniteGroup, g: usize, subsets: &[Vec<usize>], m: usize, mode: SynthMode) -> Result<()> {
    let fail = |msg: String| Err(Error::SynthVerification(msg));
    let g_inv = group.inv(g);
    let flat: Vec<(usize, usize)> =
        subsets.iter().enumerate().flat_map(|(l, hs)| hs.iter().map(move |&h| (l, h))).collect();
    for (l, hs) in subsets.iter().enumerate() {
        if hs.len() != m {
            return fail(format!("H_{} has {} elements, expected {m}", l + 1, hs.len()));
        }
    }
    for (x, &(l1, h1)) in flat.iter().enumerate() {
        group.check_element(h1)?;
        for &(l2, h2) in &flat[x + 1..] {
            if h1 == h2 {
                return fail(format!("element {h1} chosen twice"));
            }
            if l1 != l2 && (group.mul(g_inv, h1) == h2 || group.mul(g_inv, h2) == h1) {
                return fail(format!("H_{} meets g^-1 H_{}", l1 + 1, l2 + 1));
            }
            if l1 == l2 && (group.mul(g_inv, h1) == h2 || group.mul(g_inv, h2) == h1) {
                return fail(format!("H_{} contains h and g^-1 h", l1 + 1));
            }
            if mode == SynthMode::General {
                let t1: Vec<usize> = (-2..=2).map(|k| group.mul(group.pow(g, k), h1)).collect();
                if (-2..=2).any(|k| t1.contains(&group.mul(group.pow(g, k), h2))) {
                    return fail(format!("translates of {h1} and {h2} overlap"));
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig<T> {
    pub b: T,
    pub c: T,
    pub m: usize,
    pub g: usize,
    pub orders: OrderSet,
    pub mode: SynthMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Synthesis<T> {
    pub group: Arc<FiniteGroup>,
    pub mode: SynthMode,
    pub g: usize,
    pub b: T,
    pub c: T,
    pub m: usize,
    pub orders: OrderSet,
    pub kernel: GroupFunction<T>,
    pub tower: UTower<T>,
    pub subsets: Vec<Vec<usize>>,
    pub epsilon: T,
    pub thresholds: Vec<T>,
    pub ms: Vec<T>,
    pub big_ms: Vec<T>,
}

impl<T: Scalar> Synthesis<T> {
    /// `u_2, u_4, ..., u_{2m}`.
    pub fn functions(&self) -> Vec<GroupFunction<T>> {
        (1..=self.m).map(|j| self.tower.function(&self.group, self.g, 2 * j).expect("g validated")).collect()
    }
}

/// Values of `u~_{2j}` at `h` for `j = 1..m` under kernel values `k`.
fn conv_at<T: Scalar>(
    tower: &UTower<T>,
    m: usize,
    kernel: &[T],
    group: &FiniteGroup,
    g_inv: usize,
    h: usize,
) -> Vec<T> {
    let slice = (kernel[h].clone(), kernel[group.mul(g_inv, h)].clone());
    (1..=m).map(|j| tower.eval(2 * j, &slice)).collect()
}

fn spread<T: Scalar>(values: &[T]) -> T {
    let max = values.iter().cloned().reduce(T::max_of).expect("nonempty");
    let min = values.iter().cloned().reduce(T::min_of).expect("nonempty");
    max - min
}

/// Builds the kernel realizing every order of `config.orders`.
pub fn synth_kernel<T: Scalar>(group: Arc<FiniteGroup>, config: &SynthConfig<T>) -> Result<Synthesis<T>> {
    let SynthConfig { b, c, m, g, orders, mode } = config;
    let (m, g, mode) = (*m, *g, *mode);
    if !b.is_positive() || c <= b {
        return Err(Error::InvalidArgument("need C > B > 0".into()));
    }
    if m < 2 {
        return Err(Error::InvalidArgument("synthesis needs m >= 2 (the gap eps vanishes for m = 1)".into()));
    }
    if orders.is_empty() {
        return Err(Error::InvalidArgument("target order set is empty".into()));
    }
    if orders.m != m || orders.rankings.iter().any(|o| !o.is_strict() || o.len() != m) {
        return Err(Error::InvalidArgument(format!("target orders must be permutations of [{m}]")));
    }
    let r = orders.len();
    let required = mode.size_factor() * r as u128 * m as u128;
    if (group.order() as u128) < required {
        return Err(Error::GroupTooSmall { required, actual: group.order() });
    }
    check_mode_element(&group, g, mode)?;

    let tower = build_u_tower(b.clone(), c.clone(), m)?;
    let eps = epsilon(b, c, m, r);
    let subsets = choose_subsets(&group, g, r, m, mode)?;
    let g_inv = group.inv(g);
    let n = group.order();
    let all_h: Vec<usize> = subsets.iter().flatten().copied().collect();

    let mut kt = vec![T::zero(); n];
    let mut m_prev = c.clone();
    let mut big_prev = T::zero();
    let (mut ms, mut big_ms) = (Vec::with_capacity(r), Vec::with_capacity(r));
    for (l, order) in orders.rankings.iter().enumerate() {
        let slots = OrderSet::slots(order);
        for i in 1..=m {
            let target = m_prev.clone() - T::from_int((m - i + 1) as i64) * (big_prev.clone() + eps.clone());
            let k = solve_k_vector(&tower, 2 * (slots[i - 1] + 1), &target)?;
            let h = subsets[l][i - 1];
            kt[h] = k.0;
            kt[group.mul(g_inv, h)] = k.1;
        }
        let m_l = subsets[..=l]
            .iter()
            .flatten()
            .flat_map(|&h| conv_at(&tower, m, &kt, &group, g_inv, h))
            .filter(|v| v > b)
            .reduce(T::min_of)
            .ok_or_else(|| Error::SynthVerification(format!("no value above B after step {}", l + 1)))?;
        let probe = eps.clone() - m_l.clone();
        let mut nus = vec![T::zero(); m];
        for &h in &all_h {
            for (nu, v) in nus.iter_mut().zip(conv_at(&tower, m, &kt, &group, g_inv, h)) {
                let x = v + probe.clone();
                if x.is_positive() {
                    *nu = nu.clone() + x;
                }
            }
        }
        let big_l = spread(&nus);
        ms.push(m_l.clone());
        big_ms.push(big_l.clone());
        m_prev = m_l;
        big_prev = big_l;
    }

    let kernel = match mode {
        SynthMode::OrderTwo => GroupFunction::new(group.clone(), kt)?,
        SynthMode::General => {
            let kmax = kt.iter().map(|v| v.abs()).reduce(T::max_of).unwrap_or_else(T::zero);
            let even: Vec<T> =
                (1..=m).flat_map(|j| [tower.coeffs[2 * j].0.clone(), tower.coeffs[2 * j].1.clone()]).collect();
            let s = even.iter().cloned().reduce(T::min_of).expect("m >= 2");
            let big_s = even.iter().cloned().reduce(T::max_of).expect("m >= 2");
            let guard = -(kmax * big_s / s);
            let mut k = vec![T::zero(); n];
            for &h in &all_h {
                k[h] = kt[h].clone();
                let gh = group.mul(g_inv, h);
                k[gh] = kt[gh].clone();
                k[group.mul(group.pow(g, -2), h)] = guard.clone();
                k[group.mul(g, h)] = guard.clone();
            }
            GroupFunction::new(group.clone(), k)?
        }
    };

    let half = T::from_int(2);
    let thresholds = ms.iter().map(|m_l| m_l.clone() - eps.clone() / half.clone()).collect();
    let result = Synthesis {
        group,
        mode,
        g,
        b: b.clone(),
        c: c.clone(),
        m,
        orders: orders.clone(),
        kernel,
        tower,
        subsets,
        epsilon: eps,
        thresholds,
        ms,
        big_ms,
    };
    post_check(&result)?;
    Ok(result)
}

fn post_check<T: Scalar>(s: &Synthesis<T>) -> Result<()> {
    let fs = s.functions();
    let mu = Measure::counting(s.group.clone());
    let family = Family::new(&s.kernel, &fs, &mu)?;
    for (l, (order, c_l)) in s.orders.rankings.iter().zip(&s.thresholds).enumerate() {
        let nus = family.nu_values(&-c_l.clone());
        if &Ranking::from_values(&nus) != order {
            return Err(Error::SynthVerification(format!("ranking at -c_{} differs from the target", l + 1)));
        }
        if min_gap(&nus) < s.epsilon {
            return Err(Error::SynthVerification(format!("nu gap below eps at -c_{}", l + 1)));
        }
    }
    for (l, m_l) in s.ms.iter().enumerate() {
        let low = m_l.clone() - s.epsilon.clone();
        if family.conv.iter().flatten().any(|v| *v > low && v < m_l) {
            return Err(Error::SynthVerification(format!("convolution value inside (m_{0} - eps, m_{0})", l + 1)));
        }
    }
    if s.mode == SynthMode::General {
        for h in guard_positions(s) {
            if family.conv.iter().any(|vals| vals[h].is_positive()) {
                return Err(Error::SynthVerification(format!("positive convolution value at guard position {h}")));
            }
        }
    }
    Ok(())
}

fn min_gap<T: Scalar>(values: &[T]) -> T {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.cmp_total(b));
    sorted.windows(2).map(|w| w[1].clone() - w[0].clone()).reduce(T::min_of).unwrap_or_else(T::zero)
}

/// `g^-2 h, g^-1 h, g h, g^2 h` for every chosen `h`, excluding the chosen
/// elements themselves.
fn guard_positions<T>(s: &Synthesis<T>) -> Vec<usize> {
    let grp = &s.group;
    let chosen: Vec<usize> = s.subsets.iter().flatten().copied().collect();
    let mut out: Vec<usize> = chosen
        .iter()
        .flat_map(|&h| [-2i64, -1, 1, 2].map(|k| grp.mul(grp.pow(s.g, k), h)))
        .filter(|x| !chosen.contains(x))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Result of one named check in [`verify_synth`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthReport {
    pub checks: Vec<Check>,
}

impl SynthReport {
    fn push(&mut self, name: &str, failures: Vec<String>) {
        let detail = if failures.is_empty() { None } else { Some(failures.join("; ")) };
        self.checks.push(Check { name: name.into(), passed: detail.is_none(), detail });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Recomputes every claimed property of `s` from the kernel, the functions
/// and the recorded constants, using only convolution and `nu`.
pub fn verify_synth<T: Scalar>(s: &Synthesis<T>, orders: &OrderSet) -> Result<SynthReport> {
    let mut report = SynthReport { checks: Vec::new() };
    let fs = s.functions();
    let mu = Measure::counting(s.group.clone());
    let conv: Vec<Vec<T>> =
        fs.iter().map(|f| convolve(f, &s.kernel, &mu).map(GroupFunction::into_values)).collect::<Result<_>>()?;
    let nu_at = |c: &T| -> Vec<T> {
        conv.iter()
            .map(|vals| {
                vals.iter().fold(T::zero(), |acc, v| {
                    let x = v.clone() + c.clone();
                    if x.is_positive() {
                        acc + x
                    } else {
                        acc
                    }
                })
            })
            .collect()
    };
    let eps = &s.epsilon;
    let m = s.m;
    let r = orders.len();
    let half = T::from_int(2);

    let mut f = Vec::new();
    if s.thresholds.len() != r || s.ms.len() != r {
        f.push(format!("expected {r} thresholds and m_l values"));
    }
    for (l, (c_l, m_l)) in s.thresholds.iter().zip(&s.ms).enumerate() {
        if *c_l != m_l.clone() - eps.clone() / half.clone() {
            f.push(format!("c_{} != m_{} - eps/2", l + 1, l + 1));
        }
    }
    report.push("thresholds", f);

    let mut f = Vec::new();
    let mut gaps = Vec::new();
    for (l, order) in orders.rankings.iter().enumerate() {
        let Some(c_l) = s.thresholds.get(l) else { break };
        let nus = nu_at(&-c_l.clone());
        if &Ranking::from_values(&nus) != order {
            f.push(format!(
                "ranking at -c_{} is {:?}, expected {:?}",
                l + 1,
                Ranking::from_values(&nus).ranks(),
                order.ranks()
            ));
        }
        for i in 0..m {
            for j in i + 1..m {
                if (nus[i].clone() - nus[j].clone()).abs() < *eps {
                    gaps.push(format!("|nu_{} - nu_{}| < eps at -c_{}", i + 1, j + 1, l + 1));
                }
            }
        }
    }
    report.push("orders", f);
    report.push("gaps", gaps);

    let mut f = Vec::new();
    for (l, m_l) in s.ms.iter().enumerate() {
        let low = m_l.clone() - eps.clone();
        let inside = conv.iter().flatten().filter(|v| **v > low && *v < m_l).count();
        if inside > 0 {
            f.push(format!("{inside} values inside (m_{0} - eps, m_{0})", l + 1));
        }
    }
    report.push("band", f);

    let mut f = Vec::new();
    for (l, m_l) in s.ms.iter().enumerate() {
        let at_least = conv.iter().flatten().filter(|v| *v >= m_l).count();
        if at_least != (l + 1) * m {
            f.push(format!("{at_least} values >= m_{}, expected {}", l + 1, (l + 1) * m));
        }
        if !conv.iter().flatten().any(|v| v == m_l) {
            f.push(format!("m_{} is not attained", l + 1));
        }
    }
    report.push("levels", f);

    let mut f = Vec::new();
    let mt = T::from_int(m as i64);
    let mut power = T::one();
    for (l, m_l) in s.ms.iter().enumerate() {
        power = power * mt.clone();
        let big = spread(&nu_at(&(eps.clone() - m_l.clone())));
        if Some(&big) != s.big_ms.get(l) {
            f.push(format!("recorded M_{} differs from the recomputed spread", l + 1));
        }
        if m_l.clone() - mt.clone() * (big.clone() + eps.clone()) <= s.b {
            f.push(format!("B >= m_{0} - m (M_{0} + eps)", l + 1));
        }
        if big > eps.clone() * (power.clone() - T::one()) {
            f.push(format!("M_{0} > eps (m^{0} - 1)", l + 1));
        }
    }
    report.push("level_bounds", f);

    let mut f = Vec::new();
    for (j, u) in fs.iter().enumerate() {
        if !u.value(s.group.identity()).is_positive() || !u.value(s.g).is_positive() {
            f.push(format!("u_{} has a non-positive coefficient", 2 * (j + 1)));
        }
    }
    report.push("tower_positive", f);

    if s.mode == SynthMode::General {
        report.push("guards", guard_failures(s, &fs, &conv));
    }
    Ok(report)
}

fn guard_failures<T: Scalar>(s: &Synthesis<T>, fs: &[GroupFunction<T>], conv: &[Vec<T>]) -> Vec<String> {
    let grp = &s.group;
    let mut f = Vec::new();
    let chosen: Vec<usize> = s.subsets.iter().flatten().copied().collect();
    let kv = s.kernel.values();
    let mut core = Vec::new();
    for &h in &chosen {
        core.push(h);
        core.push(grp.mul(grp.inv(s.g), h));
    }
    let kmax = core.iter().map(|&x| kv[x].abs()).reduce(T::max_of).unwrap_or_else(T::zero);
    let coeffs: Vec<T> = fs.iter().flat_map(|u| [u.value(grp.identity()).clone(), u.value(s.g).clone()]).collect();
    let small = coeffs.iter().cloned().reduce(T::min_of).unwrap_or_else(T::one);
    let large = coeffs.iter().cloned().reduce(T::max_of).unwrap_or_else(T::one);
    let guard = -(kmax * large / small);
    let mut guards = Vec::new();
    for &h in &chosen {
        guards.push(grp.mul(grp.pow(s.g, -2), h));
        guards.push(grp.mul(s.g, h));
    }
    for &x in &guards {
        if kv[x] != guard {
            f.push(format!("kernel at guard position {x} is not -K S / s"));
        }
    }
    for x in grp.elements() {
        if !core.contains(&x) && !guards.contains(&x) && !kv[x].is_zero() {
            f.push(format!("kernel nonzero at {x} outside the designated positions"));
        }
    }
    for &h in &chosen {
        for k in [-2i64, -1, 1, 2] {
            let x = grp.mul(grp.pow(s.g, k), h);
            if conv.iter().any(|vals| vals[x].is_positive()) {
                f.push(format!("positive convolution value at {x}"));
            }
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::build_complete_orders;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn epsilons_by_formula() {
        let t = build_u_tower(q(1, 1), q(2, 1), 2).unwrap();
        assert_eq!(t.epsilons, vec![q(21, 2), q(9, 1)]);
        let t = build_u_tower(q(1, 1), q(2, 1), 1).unwrap();
        assert_eq!(t.epsilons, vec![q(9, 1)]);
        assert_eq!(t.coeffs[2], (q(9, 1), q(1, 1)));
        assert_eq!(t.coeffs[3], (q(1, 1), q(9, 1)));
    }

    #[test]
    fn odd_entries_swap_even_ones() {
        let t = build_u_tower(q(1, 1), q(2, 1), 5).unwrap();
        for j in 1..=5 {
            let (a, b) = t.coeffs[2 * j].clone();
            assert_eq!(t.coeffs[2 * j + 1], (b, a));
        }
    }

    #[test]
    fn solve_by_hand() {
        let t = build_u_tower(q(1, 1), q(2, 1), 1).unwrap();
        let k = solve_k_vector(&t, 2, &q(3, 2)).unwrap();
        assert_eq!(k, (q(1, 3), q(-3, 2)));
        assert_eq!(t.eval(2, &k), q(3, 2));
        assert_eq!(t.eval(3, &k), q(1, 3) - q(27, 2));
        assert!(solve_k_vector(&t, 2, &q(1, 1)).is_err());
        assert!(solve_k_vector(&t, 3, &q(3, 2)).is_err());
    }

    #[test]
    fn epsilon_value() {
        assert_eq!(epsilon(&q(1, 1), &q(2, 1), 2, 2), q(1, 32));
        assert_eq!(epsilon(&q(1, 1), &q(2, 1), 1, 1), q(0, 1));
    }

    #[test]
    fn subsets_on_cyclic_18() {
        let g = FiniteGroup::from_spec_str("cyclic:18").unwrap();
        let h = choose_subsets(&g, 9, 3, 3, SynthMode::OrderTwo).unwrap();
        assert_eq!(h, vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]]);
        let bad = vec![vec![0, 1, 2], vec![3, 4, 0], vec![6, 7, 8]];
        assert!(verify_subsets(&g, 9, &bad, 3, SynthMode::OrderTwo).is_err());
        assert!(choose_subsets(&g, 9, 4, 3, SynthMode::OrderTwo).is_err());
    }

    #[test]
    fn general_subsets_on_cyclic_81() {
        let g = FiniteGroup::from_spec_str("cyclic:81").unwrap();
        let h = choose_subsets(&g, 1, 3, 3, SynthMode::General).unwrap();
        assert_eq!(h[0], vec![0, 5, 10]);
        assert!(choose_subsets(&g, 1, 3, 3, SynthMode::OrderTwo).is_err());
    }

    #[test]
    fn synthesis_m2_passes_its_own_checks() {
        let grp = Arc::new(FiniteGroup::from_spec_str("cyclic:8").unwrap());
        let orders = build_complete_orders(2).unwrap();
        let cfg = SynthConfig { b: q(1, 1), c: q(2, 1), m: 2, g: 4, orders: orders.clone(), mode: SynthMode::OrderTwo };
        let s = synth_kernel(grp, &cfg).unwrap();
        assert_eq!(s.epsilon, q(1, 32));
        let report = verify_synth(&s, &orders).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn synthesis_rejects_bad_configs() {
        let grp = Arc::new(FiniteGroup::from_spec_str("cyclic:8").unwrap());
        let orders = build_complete_orders(2).unwrap();
        let mut cfg = SynthConfig { b: q(1, 1), c: q(2, 1), m: 2, g: 4, orders, mode: SynthMode::OrderTwo };
        cfg.g = 1;
        assert!(matches!(synth_kernel(grp.clone(), &cfg), Err(Error::MissingElement(_))));
        cfg.g = 4;
        cfg.c = q(1, 2);
        assert!(synth_kernel(grp.clone(), &cfg).is_err());
        let small = Arc::new(FiniteGroup::from_spec_str("cyclic:6").unwrap());
        cfg.c = q(2, 1);
        cfg.g = 3;
        assert!(matches!(synth_kernel(small, &cfg), Err(Error::GroupTooSmall { required: 8, actual: 6 })));
    }
}

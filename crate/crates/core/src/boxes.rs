//! The 2-party, 2-input, 2-output box and its algebra.
//!
//! A box holds the 16 conditional probabilities `P(ab|A_x B_y)` in the fixed
//! order `(x, y, a, b)`, flattened as `8x + 4y + 2a + b`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub const BITS: [u8; 2] = [0, 1];

#[inline]
pub fn index(x: u8, y: u8, a: u8, b: u8) -> usize {
    debug_assert!(x < 2 && y < 2 && a < 2 && b < 2);
    ((x as usize) << 3) | ((y as usize) << 2) | ((a as usize) << 1) | b as usize
}

/// Inverse of [`index`].
#[inline]
pub fn coords(i: usize) -> (u8, u8, u8, u8) {
    (((i >> 3) & 1) as u8, ((i >> 2) & 1) as u8, ((i >> 1) & 1) as u8, (i & 1) as u8)
}

fn sign(bit: u8) -> i64 {
    if bit == 0 {
        1
    } else {
        -1
    }
}

fn parse_bits<const N: usize>(s: &str, prefix: &str) -> Result<[u8; N]> {
    let body = s
        .strip_prefix(prefix)
        .or_else(|| s.strip_prefix(&prefix.to_ascii_lowercase()))
        .unwrap_or(s);
    let bad = || Error::Parse(format!("expected {prefix} followed by {N} bits, got {s:?}"));
    if body.len() != N {
        return Err(bad());
    }
    let mut out = [0u8; N];
    for (slot, c) in out.iter_mut().zip(body.chars()) {
        *slot = match c {
            '0' => 0,
            '1' => 1,
            _ => return Err(bad()),
        };
    }
    Ok(out)
}

/// Deterministic strategy `a = αx ⊕ β`, `b = γy ⊕ ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DetLabel {
    pub alpha: u8,
    pub beta: u8,
    pub gamma: u8,
    pub epsilon: u8,
}

impl DetLabel {
    pub fn new(alpha: u8, beta: u8, gamma: u8, epsilon: u8) -> Self {
        assert!(alpha < 2 && beta < 2 && gamma < 2 && epsilon < 2, "label bits must be 0 or 1");
        DetLabel { alpha, beta, gamma, epsilon }
    }

    /// Label whose bits spell `i` in binary, `alpha` most significant.
    pub fn from_index(i: usize) -> Self {
        assert!(i < 16);
        DetLabel::new((i >> 3) as u8 & 1, (i >> 2) as u8 & 1, (i >> 1) as u8 & 1, i as u8 & 1)
    }

    pub fn index(&self) -> usize {
        ((self.alpha as usize) << 3) | ((self.beta as usize) << 2) | ((self.gamma as usize) << 1) | self.epsilon as usize
    }

    pub fn all() -> impl Iterator<Item = DetLabel> {
        (0..16).map(DetLabel::from_index)
    }

    pub fn alice_output(&self, x: u8) -> u8 {
        (self.alpha & x) ^ self.beta
    }

    pub fn bob_output(&self, y: u8) -> u8 {
        (self.gamma & y) ^ self.epsilon
    }
}

impl fmt::Display for DetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}{}{}{}", self.alpha, self.beta, self.gamma, self.epsilon)
    }
}

impl FromStr for DetLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let [a, b, c, d] = parse_bits::<4>(s, "D")?;
        Ok(DetLabel::new(a, b, c, d))
    }
}

impl Serialize for DetLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DetLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// PR box symmetry: outputs satisfy `a ⊕ b = xy ⊕ αx ⊕ βy ⊕ γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrLabel {
    pub alpha: u8,
    pub beta: u8,
    pub gamma: u8,
}

impl PrLabel {
    pub const CANONICAL: PrLabel = PrLabel { alpha: 0, beta: 0, gamma: 0 };

    pub fn new(alpha: u8, beta: u8, gamma: u8) -> Self {
        assert!(alpha < 2 && beta < 2 && gamma < 2, "label bits must be 0 or 1");
        PrLabel { alpha, beta, gamma }
    }

    pub fn from_index(i: usize) -> Self {
        assert!(i < 8);
        PrLabel::new((i >> 2) as u8 & 1, (i >> 1) as u8 & 1, i as u8 & 1)
    }

    pub fn index(&self) -> usize {
        ((self.alpha as usize) << 2) | ((self.beta as usize) << 1) | self.gamma as usize
    }

    pub fn all() -> impl Iterator<Item = PrLabel> {
        (0..8).map(PrLabel::from_index)
    }

    pub fn parity(&self, x: u8, y: u8) -> u8 {
        (x & y) ^ (self.alpha & x) ^ (self.beta & y) ^ self.gamma
    }
}

impl fmt::Display for PrLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PR{}{}{}", self.alpha, self.beta, self.gamma)
    }
}

impl FromStr for PrLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let [a, b, c] = parse_bits::<3>(s, "PR")?;
        Ok(PrLabel::new(a, b, c))
    }
}

impl Serialize for PrLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An element of the 128-element relabeling group: optional party swap,
/// then per-party input flips and input-dependent output flips.
///
/// The coordinate map applied to an entry `(x, y, a, b)` is: swap the
/// parties if `swap`; then `a ← a ⊕ alice_outputs[x]`, `x ← x ⊕ alice_input`
/// and likewise for Bob.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Relabeling {
    pub swap: bool,
    pub alice_input: bool,
    pub bob_input: bool,
    pub alice_outputs: [bool; 2],
    pub bob_outputs: [bool; 2],
}

impl Relabeling {
    pub const ORDER: usize = 128;

    pub fn identity() -> Self {
        Relabeling::default()
    }

    /// Group element number `i`; `0` is the identity. Bit layout, least
    /// significant first: Bob's output flips (y=0, y=1), Alice's output flips
    /// (x=0, x=1), Bob's input flip, Alice's input flip, party swap.
    pub fn from_index(i: usize) -> Self {
        assert!(i < Self::ORDER);
        let bit = |k: usize| (i >> k) & 1 == 1;
        Relabeling {
            bob_outputs: [bit(0), bit(1)],
            alice_outputs: [bit(2), bit(3)],
            bob_input: bit(4),
            alice_input: bit(5),
            swap: bit(6),
        }
    }

    pub fn index(&self) -> usize {
        (self.bob_outputs[0] as usize)
            | (self.bob_outputs[1] as usize) << 1
            | (self.alice_outputs[0] as usize) << 2
            | (self.alice_outputs[1] as usize) << 3
            | (self.bob_input as usize) << 4
            | (self.alice_input as usize) << 5
            | (self.swap as usize) << 6
    }

    pub fn all() -> impl Iterator<Item = Relabeling> {
        (0..Self::ORDER).map(Relabeling::from_index)
    }

    /// Flip Alice's output on both inputs.
    pub fn flip_alice_outputs() -> Self {
        Relabeling { alice_outputs: [true, true], ..Default::default() }
    }

    pub fn party_swap() -> Self {
        Relabeling { swap: true, ..Default::default() }
    }

    pub fn map(&self, x: u8, y: u8, a: u8, b: u8) -> (u8, u8, u8, u8) {
        let (x, y, a, b) = if self.swap { (y, x, b, a) } else { (x, y, a, b) };
        let a = a ^ self.alice_outputs[x as usize] as u8;
        let b = b ^ self.bob_outputs[y as usize] as u8;
        (x ^ self.alice_input as u8, y ^ self.bob_input as u8, a, b)
    }

    fn permutation(&self) -> [usize; 16] {
        std::array::from_fn(|i| {
            let (x, y, a, b) = coords(i);
            let (x, y, a, b) = self.map(x, y, a, b);
            index(x, y, a, b)
        })
    }

    fn from_permutation(perm: &[usize; 16]) -> Self {
        Relabeling::all()
            .find(|r| &r.permutation() == perm)
            .expect("relabeling group is closed")
    }

    /// `self ∘ first`: relabel by `first`, then by `self`.
    pub fn after(&self, first: &Relabeling) -> Relabeling {
        let p1 = first.permutation();
        let p2 = self.permutation();
        Relabeling::from_permutation(&std::array::from_fn(|i| p2[p1[i]]))
    }

    pub fn inverse(&self) -> Relabeling {
        let p = self.permutation();
        let mut inv = [0usize; 16];
        for (i, &j) in p.iter().enumerate() {
            inv[j] = i;
        }
        Relabeling::from_permutation(&inv)
    }
}

/// A normalized table `P(ab|A_x B_y)`.
///
/// Boxes built through [`BoxTable::new`] are nonnegative and normalized per
/// input pair. Nonsignaling is *not* a type invariant; see
/// [`BoxTable::is_nonsignaling`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoxTable {
    p: [Rational; 16],
}

impl BoxTable {
    pub fn new(entries: [Rational; 16]) -> Result<Self> {
        if let Some(i) = entries.iter().position(Rational::is_negative) {
            let (x, y, a, b) = coords(i);
            return Err(Error::InvalidBox(format!("P({a}{b}|A{x}B{y}) = {} is negative", entries[i])));
        }
        let table = BoxTable { p: entries };
        for x in BITS {
            for y in BITS {
                let total = table.context_total(x, y);
                if !total.is_one() {
                    return Err(Error::InvalidBox(format!(
                        "probabilities for input pair ({x},{y}) sum to {total}"
                    )));
                }
            }
        }
        Ok(table)
    }

    /// Skips validation; entries may be negative. Used for residuals whose
    /// nonnegativity is reported rather than enforced.
    pub(crate) fn from_entries_unchecked(entries: [Rational; 16]) -> Self {
        BoxTable { p: entries }
    }

    pub fn from_fn(f: impl Fn(u8, u8, u8, u8) -> Rational) -> Result<Self> {
        BoxTable::new(std::array::from_fn(|i| {
            let (x, y, a, b) = coords(i);
            f(x, y, a, b)
        }))
    }

    fn context_total(&self, x: u8, y: u8) -> Rational {
        BITS.iter()
            .flat_map(|&a| BITS.iter().map(move |&b| index(x, y, a, b)))
            .map(|i| &self.p[i])
            .sum()
    }

    pub fn get(&self, x: u8, y: u8, a: u8, b: u8) -> &Rational {
        &self.p[index(x, y, a, b)]
    }

    pub fn entries(&self) -> &[Rational; 16] {
        &self.p
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.p.iter().any(Rational::is_negative)
    }

    pub fn deterministic(label: DetLabel) -> Self {
        BoxTable::from_fn(|x, y, a, b| {
            let hit = a == label.alice_output(x) && b == label.bob_output(y);
            Rational::from_integer(hit as i64)
        })
        .expect("deterministic box is valid")
    }

    pub fn pr(label: PrLabel) -> Self {
        let half = Rational::new(1, 2);
        BoxTable::from_fn(|x, y, a, b| {
            if a ^ b == label.parity(x, y) {
                half.clone()
            } else {
                Rational::zero()
            }
        })
        .expect("PR box is valid")
    }

    pub fn maximally_mixed() -> Self {
        BoxTable { p: std::array::from_fn(|_| Rational::new(1, 4)) }
    }

    /// Convex combination `Σ w_i B_i`. Weights must be nonnegative and sum
    /// to one.
    pub fn mix<'a, I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a Rational, &'a BoxTable)>,
    {
        let mut acc: [Rational; 16] = Default::default();
        let mut total = Rational::zero();
        let mut count = 0usize;
        for (w, b) in terms {
            if w.is_negative() {
                return Err(Error::Weight(format!("negative weight {w}")));
            }
            count += 1;
            total += w;
            if w.is_zero() {
                continue;
            }
            for (slot, v) in acc.iter_mut().zip(&b.p) {
                *slot += w * v;
            }
        }
        if count == 0 {
            return Err(Error::Weight("empty mixture".into()));
        }
        if !total.is_one() {
            return Err(Error::Weight(format!("weights sum to {total}, not 1")));
        }
        Ok(BoxTable { p: acc })
    }

    /// Owned-argument convenience over [`BoxTable::mix`].
    pub fn mix_of(terms: &[(Rational, BoxTable)]) -> Result<Self> {
        BoxTable::mix(terms.iter().map(|(w, b)| (w, b)))
    }

    pub fn relabel(&self, r: &Relabeling) -> BoxTable {
        let mut out: [Rational; 16] = Default::default();
        for (i, v) in self.p.iter().enumerate() {
            let (x, y, a, b) = coords(i);
            let (x, y, a, b) = r.map(x, y, a, b);
            out[index(x, y, a, b)] = v.clone();
        }
        BoxTable { p: out }
    }

    /// `P(a|A_x)` computed with Bob's input `y`.
    pub fn alice_marginal(&self, x: u8, y: u8, a: u8) -> Rational {
        self.get(x, y, a, 0) + self.get(x, y, a, 1)
    }

    /// `P(b|B_y)` computed with Alice's input `x`.
    pub fn bob_marginal(&self, x: u8, y: u8, b: u8) -> Rational {
        self.get(x, y, 0, b) + self.get(x, y, 1, b)
    }

    pub fn is_nonsignaling(&self) -> bool {
        let alice = BITS.iter().all(|&x| {
            BITS.iter().all(|&a| self.alice_marginal(x, 0, a) == self.alice_marginal(x, 1, a))
        });
        let bob = BITS.iter().all(|&y| {
            BITS.iter().all(|&b| self.bob_marginal(0, y, b) == self.bob_marginal(1, y, b))
        });
        alice && bob
    }

    pub fn correlator(&self, x: u8, y: u8) -> Rational {
        let mut acc = Rational::zero();
        for a in BITS {
            for b in BITS {
                let v = self.get(x, y, a, b);
                if sign(a ^ b) > 0 {
                    acc += v;
                } else {
                    acc -= v;
                }
            }
        }
        acc
    }

    pub fn correlation_summary(&self) -> Result<CorrelationSummary> {
        if !self.is_nonsignaling() {
            return Err(Error::Signaling);
        }
        let correlators: [Rational; 4] = std::array::from_fn(|k| self.correlator((k >> 1) as u8, (k & 1) as u8));
        let alice: [Rational; 2] =
            std::array::from_fn(|x| self.alice_marginal(x as u8, 0, 0) - self.alice_marginal(x as u8, 0, 1));
        let bob: [Rational; 2] =
            std::array::from_fn(|y| self.bob_marginal(0, y as u8, 0) - self.bob_marginal(0, y as u8, 1));
        let covariances =
            std::array::from_fn(|k| &correlators[k] - &alice[k >> 1] * &bob[k & 1]);
        Ok(CorrelationSummary { correlators, alice_marginals: alice, bob_marginals: bob, covariances })
    }

    /// `{"P": [[[[..]]]]}` indexed `[x][y][a][b]`.
    pub fn to_json(&self) -> Value {
        let nested: Vec<Value> = BITS
            .iter()
            .map(|&x| {
                Value::Array(
                    BITS.iter()
                        .map(|&y| {
                            Value::Array(
                                BITS.iter()
                                    .map(|&a| {
                                        Value::Array(
                                            BITS.iter()
                                                .map(|&b| Value::String(self.get(x, y, a, b).to_string()))
                                                .collect(),
                                        )
                                    })
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({ "P": nested })
    }

    /// Parses the box JSON format. Syntax problems come back as
    /// [`Error::Parse`] naming the offending path; well-formed tables that are
    /// negative or unnormalized as [`Error::InvalidBox`].
    pub fn from_json_str(text: &str) -> Result<Self> {
        let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("$: {e}")))?;
        BoxTable::from_json(&root)
    }

    pub fn from_json(root: &Value) -> Result<Self> {
        let p = root
            .as_object()
            .ok_or_else(|| Error::Parse("$: expected an object with key \"P\"".into()))?
            .get("P")
            .ok_or_else(|| Error::Parse("$.P: missing".into()))?;
        let mut entries: [Rational; 16] = Default::default();
        let pair = |v: &Value, path: &str| -> Result<Vec<Value>> {
            match v.as_array() {
                Some(items) if items.len() == 2 => Ok(items.clone()),
                _ => Err(Error::Parse(format!("{path}: expected an array of length 2"))),
            }
        };
        for (x, vx) in pair(p, "$.P")?.iter().enumerate() {
            let px = format!("$.P[{x}]");
            for (y, vy) in pair(vx, &px)?.iter().enumerate() {
                let py = format!("{px}[{y}]");
                for (a, va) in pair(vy, &py)?.iter().enumerate() {
                    let pa = format!("{py}[{a}]");
                    for (b, vb) in pair(va, &pa)?.iter().enumerate() {
                        let pb = format!("{pa}[{b}]");
                        let text = vb
                            .as_str()
                            .ok_or_else(|| Error::Parse(format!("{pb}: expected a rational string")))?;
                        let value: Rational =
                            text.parse().map_err(|_| Error::Parse(format!("{pb}: not a rational: {text:?}")))?;
                        entries[index(x as u8, y as u8, a as u8, b as u8)] = value;
                    }
                }
            }
        }
        BoxTable::new(entries)
    }
}

impl fmt::Debug for BoxTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (i, v) in self.p.iter().enumerate() {
            let (x, y, a, b) = coords(i);
            m.entry(&format_args!("P({a}{b}|{x}{y})"), v);
        }
        m.finish()
    }
}

impl Serialize for BoxTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Correlators, marginals and covariances of a nonsignaling box. Arrays over
/// input pairs are indexed `2x + y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrelationSummary {
    pub correlators: [Rational; 4],
    pub alice_marginals: [Rational; 2],
    pub bob_marginals: [Rational; 2],
    pub covariances: [Rational; 4],
}

impl CorrelationSummary {
    pub fn correlator(&self, x: u8, y: u8) -> &Rational {
        &self.correlators[2 * x as usize + y as usize]
    }

    pub fn covariance(&self, x: u8, y: u8) -> &Rational {
        &self.covariances[2 * x as usize + y as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn det(l: &str) -> BoxTable {
        BoxTable::deterministic(l.parse().unwrap())
    }

    fn pr(l: &str) -> BoxTable {
        BoxTable::pr(l.parse().unwrap())
    }

    #[test]
    fn deterministic_examples() {
        let d = det("D0000");
        for x in BITS {
            for y in BITS {
                assert!(d.get(x, y, 0, 0).is_one());
            }
        }
        let d = det("D0101");
        for x in BITS {
            for y in BITS {
                assert!(d.get(x, y, 1, 1).is_one());
            }
        }
        let d = det("D1010");
        for i in 0..16 {
            let (x, y, a, b) = coords(i);
            assert_eq!(d.get(x, y, a, b).is_one(), a == x && b == y);
        }
    }

    #[test]
    fn pr_examples() {
        let p = pr("PR000");
        for (x, y) in [(0, 0), (0, 1), (1, 0)] {
            assert_eq!(*p.get(x, y, 0, 0), q(1, 2));
            assert_eq!(*p.get(x, y, 1, 1), q(1, 2));
        }
        assert_eq!(*p.get(1, 1, 0, 1), q(1, 2));
        assert_eq!(*p.get(1, 1, 1, 0), q(1, 2));
        let p = pr("PR001");
        assert_eq!(*p.get(0, 0, 0, 1), q(1, 2));
        assert_eq!(*p.get(0, 0, 1, 0), q(1, 2));
        for l in PrLabel::all() {
            let b = BoxTable::pr(l);
            assert_eq!(b.entries().iter().filter(|v| **v == q(1, 2)).count(), 8);
            assert!(b.entries().iter().all(|v| v.is_zero() || *v == q(1, 2)));
        }
    }

    #[test]
    fn uniform_mixture_of_deterministic_boxes_is_maximally_mixed() {
        let w = q(1, 16);
        let dets: Vec<BoxTable> = DetLabel::all().map(BoxTable::deterministic).collect();
        let m = BoxTable::mix(dets.iter().map(|d| (&w, d))).unwrap();
        assert_eq!(m, BoxTable::maximally_mixed());
        let s = m.correlation_summary().unwrap();
        assert!(s.correlators.iter().chain(&s.alice_marginals).chain(&s.bob_marginals).all(Rational::is_zero));
    }

    #[test]
    fn mix_examples() {
        let b = pr("PR011");
        assert_eq!(BoxTable::mix_of(&[(q(1, 1), b.clone())]).unwrap(), b);
        let m = BoxTable::mix_of(&[(q(1, 2), pr("PR000")), (q(1, 2), pr("PR100"))]).unwrap();
        let s = m.correlation_summary().unwrap();
        assert_eq!(s.correlators, [q(1, 1), q(1, 1), q(0, 1), q(0, 1)]);
        let iso = BoxTable::mix_of(&[(q(3, 4), pr("PR000")), (q(1, 4), BoxTable::maximally_mixed())]).unwrap();
        let s = iso.correlation_summary().unwrap();
        assert_eq!(s.correlators, [q(3, 4), q(3, 4), q(3, 4), q(-3, 4)]);
    }

    #[test]
    fn mix_rejects_bad_weights() {
        let b = BoxTable::maximally_mixed();
        assert!(matches!(BoxTable::mix_of(&[(q(-1, 2), b.clone()), (q(3, 2), b.clone())]), Err(Error::Weight(_))));
        assert!(matches!(BoxTable::mix_of(&[(q(1, 2), b.clone())]), Err(Error::Weight(_))));
        assert!(matches!(BoxTable::mix_of(&[]), Err(Error::Weight(_))));
    }

    #[test]
    fn relabel_examples() {
        let b = pr("PR110");
        assert_eq!(b.relabel(&Relabeling::identity()), b);
        assert_eq!(pr("PR000").relabel(&Relabeling::flip_alice_outputs()), pr("PR001"));
        assert_eq!(det("D0000").relabel(&Relabeling::party_swap()), det("D0000"));
    }

    #[test]
    fn relabeling_group_closes() {
        let all: Vec<Relabeling> = Relabeling::all().collect();
        assert_eq!(Relabeling::from_index(0), Relabeling::identity());
        for r in &all {
            assert_eq!(Relabeling::from_index(r.index()), *r);
            assert_eq!(r.after(&r.inverse()), Relabeling::identity());
            assert_eq!(r.inverse().after(r), Relabeling::identity());
        }
        let probe = BoxTable::mix_of(&[
            (q(1, 3), det("D0110")),
            (q(1, 6), pr("PR010")),
            (q(1, 2), det("D1011")),
        ])
        .unwrap();
        for r1 in all.iter().step_by(5) {
            for r2 in all.iter().step_by(3) {
                assert_eq!(probe.relabel(r1).relabel(r2), probe.relabel(&r2.after(r1)));
            }
        }
        let distinct: std::collections::HashSet<BoxTable> = all.iter().map(|r| probe.relabel(r)).collect();
        assert_eq!(distinct.len(), Relabeling::ORDER);
    }

    #[test]
    fn signaling_detection() {
        assert!(pr("PR000").is_nonsignaling());
        assert!(DetLabel::all().all(|l| BoxTable::deterministic(l).is_nonsignaling()));
        let mut e: [Rational; 16] = Default::default();
        e[index(0, 0, 0, 0)] = q(1, 1);
        e[index(0, 1, 0, 0)] = q(1, 2);
        e[index(0, 1, 0, 1)] = q(1, 2);
        e[index(1, 0, 0, 0)] = q(1, 1);
        e[index(1, 1, 0, 0)] = q(1, 1);
        let b = BoxTable::new(e).unwrap();
        assert!(!b.is_nonsignaling());
        assert_eq!(b.correlation_summary(), Err(Error::Signaling));
    }

    #[test]
    fn correlation_summary_examples() {
        let s = pr("PR000").correlation_summary().unwrap();
        let pm = [q(1, 1), q(1, 1), q(1, 1), q(-1, 1)];
        assert_eq!(s.correlators, pm);
        assert!(s.alice_marginals.iter().chain(&s.bob_marginals).all(Rational::is_zero));
        assert_eq!(s.covariances, pm);

        let s = det("D0000").correlation_summary().unwrap();
        assert!(s.correlators.iter().chain(&s.alice_marginals).chain(&s.bob_marginals).all(|v| v.is_one()));
        assert!(s.covariances.iter().all(Rational::is_zero));

        let s = BoxTable::maximally_mixed().correlation_summary().unwrap();
        assert!(s.covariances.iter().chain(&s.correlators).all(Rational::is_zero));
    }

    #[test]
    fn validation_rejects_bad_tables() {
        let mut e: [Rational; 16] = std::array::from_fn(|_| q(1, 4));
        e[0] = q(-1, 4);
        e[1] = q(3, 4);
        assert!(matches!(BoxTable::new(e), Err(Error::InvalidBox(_))));
        let e: [Rational; 16] = std::array::from_fn(|_| q(1, 5));
        assert!(matches!(BoxTable::new(e), Err(Error::InvalidBox(_))));
    }

    #[test]
    fn json_round_trip_and_paths() {
        let b = BoxTable::mix_of(&[(q(2, 3), pr("PR101")), (q(1, 3), det("D0110"))]).unwrap();
        let text = b.to_json().to_string();
        assert_eq!(BoxTable::from_json_str(&text).unwrap(), b);

        let err = BoxTable::from_json_str(r#"{"P": [[[["1","0"],["0","0"]]], [[], []]]}"#).unwrap_err();
        assert_eq!(err, Error::Parse("$.P[0]: expected an array of length 2".into()));
        let mut v = b.to_json();
        v["P"][1][0][1][1] = Value::String("x".into());
        let err = BoxTable::from_json(&v).unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.starts_with("$.P[1][0][1][1]")), "{err}");
        assert!(matches!(BoxTable::from_json_str("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn label_text_forms() {
        assert_eq!("D0110".parse::<DetLabel>().unwrap(), DetLabel::new(0, 1, 1, 0));
        assert_eq!("0110".parse::<DetLabel>().unwrap(), DetLabel::new(0, 1, 1, 0));
        assert_eq!("pr101".parse::<PrLabel>().unwrap(), PrLabel::new(1, 0, 1));
        assert!("D012".parse::<DetLabel>().is_err());
        for l in DetLabel::all() {
            assert_eq!(l.to_string().parse::<DetLabel>().unwrap(), l);
        }
    }
}

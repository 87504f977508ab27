//! The commutative side: toric g- and h-polynomials of posets, local and
//! mixed h-polynomials of strong formal subdivisions, and the linear maps
//! F, G, G*, H, L, L', G', H' that carry the cd-level invariants onto them.

use crate::ncpoly::{
    comodule_rho, render_terms, Letter, MixedPoly, MixedWord, NCPoly, NcError, Word, Q,
};
use crate::poset::{Poset, PosetError};
use crate::posetmap::{is_sfs, restrict_below, MapError, PosetMap, SfsMethod};
use num_integer::binomial;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum HError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("cannot parse commutative polynomial: {0}")]
    ParseError(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Nc(#[from] NcError),
}

/// A monomial t^a t'^b u^c u'^d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct CommMono {
    pub t: u32,
    pub tp: u32,
    pub u: u32,
    pub up: u32,
}

impl CommMono {
    pub fn total_degree(&self) -> u32 {
        self.t + self.tp + self.u + self.up
    }

    pub fn is_unprimed(&self) -> bool {
        self.tp == 0 && self.up == 0
    }

    fn render(&self) -> String {
        let mut out = String::new();
        for (var, exp) in [
            ("t", self.t),
            ("t'", self.tp),
            ("u", self.u),
            ("u'", self.up),
        ] {
            match exp {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{exp}")),
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }
}

impl Ord for CommMono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.total_degree(), self.t, self.tp, self.u, self.up).cmp(&(
            other.total_degree(),
            other.t,
            other.tp,
            other.u,
            other.up,
        ))
    }
}

impl PartialOrd for CommMono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A commutative polynomial in t, t', u, u' with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CommPoly {
    terms: BTreeMap<CommMono, Q>,
}

impl CommPoly {
    pub fn zero() -> CommPoly {
        CommPoly::default()
    }

    pub fn one() -> CommPoly {
        CommPoly::from_mono(CommMono::default(), Q::one())
    }

    pub fn from_mono(m: CommMono, q: Q) -> CommPoly {
        let mut out = CommPoly::zero();
        out.add_term(m, q);
        out
    }

    pub fn var_t() -> CommPoly {
        CommPoly::from_mono(
            CommMono {
                t: 1,
                ..Default::default()
            },
            Q::one(),
        )
    }

    pub fn var_u() -> CommPoly {
        CommPoly::from_mono(
            CommMono {
                u: 1,
                ..Default::default()
            },
            Q::one(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CommMono, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &CommMono) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: CommMono, q: Q) {
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Q::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (m, q) in other.terms() {
            out.add_term(*m, q.clone());
        }
        out
    }

    pub fn sub(&self, other: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (m, q) in other.terms() {
            out.add_term(*m, -q.clone());
        }
        out
    }

    pub fn neg(&self) -> CommPoly {
        CommPoly::zero().sub(self)
    }

    pub fn scale(&self, q: &Q) -> CommPoly {
        let mut out = CommPoly::zero();
        for (m, c) in self.terms() {
            out.add_term(*m, c.clone() * q.clone());
        }
        out
    }

    pub fn mul(&self, other: &CommPoly) -> CommPoly {
        let mut out = CommPoly::zero();
        for (m1, q1) in self.terms() {
            for (m2, q2) in other.terms() {
                let m = CommMono {
                    t: m1.t + m2.t,
                    tp: m1.tp + m2.tp,
                    u: m1.u + m2.u,
                    up: m1.up + m2.up,
                };
                out.add_term(m, q1.clone() * q2.clone());
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> CommPoly {
        let mut out = CommPoly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Swaps t with u and t' with u'.
    pub fn bar(&self) -> CommPoly {
        let mut out = CommPoly::zero();
        for (m, q) in self.terms() {
            out.add_term(
                CommMono {
                    t: m.u,
                    tp: m.up,
                    u: m.t,
                    up: m.tp,
                },
                q.clone(),
            );
        }
        out
    }

    /// Keeps the monomials whose t-exponent satisfies the predicate.
    pub fn filter_t<P: Fn(u32) -> bool>(&self, keep: P) -> CommPoly {
        let mut out = CommPoly::zero();
        for (m, q) in self.terms() {
            if keep(m.t) {
                out.add_term(*m, q.clone());
            }
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|q| q.is_integer())
    }

    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degree = None;
        for (m, _) in self.terms() {
            match degree {
                None => degree = Some(m.total_degree()),
                Some(d) if d != m.total_degree() => return None,
                _ => {}
            }
        }
        degree
    }

    pub fn parse(input: &str) -> Result<CommPoly, HError> {
        let mut out = CommPoly::zero();
        let mut chars = input.chars().peekable();
        let mut sign = Q::one();
        let mut expect_term = true;
        let mut saw_any = false;
        while let Some(&ch) = chars.peek() {
            match ch {
                ' ' | '\t' => {
                    chars.next();
                }
                '+' => {
                    chars.next();
                    sign = Q::one();
                    expect_term = true;
                }
                '-' => {
                    chars.next();
                    sign = -Q::one();
                    expect_term = true;
                }
                _ => {
                    if !expect_term {
                        return Err(HError::ParseError(format!(
                            "unexpected character '{ch}' (missing + or -)"
                        )));
                    }
                    let (mono, coeff) = parse_comm_term(&mut chars)?;
                    out.add_term(mono, sign.clone() * coeff);
                    sign = Q::one();
                    expect_term = false;
                    saw_any = true;
                }
            }
        }
        if expect_term && saw_any {
            return Err(HError::ParseError("dangling sign".into()));
        }
        if !saw_any && !input.trim().is_empty() {
            return Err(HError::ParseError("no terms found".into()));
        }
        if input.trim().is_empty() {
            return Err(HError::ParseError("empty input".into()));
        }
        Ok(out)
    }
}

fn parse_comm_term(
    chars: &mut std::iter::Peekable<std::str::Chars>,
) -> Result<(CommMono, Q), HError> {
    let mut coeff = Q::one();
    let mut saw_digits = false;
    let mut numer = String::new();
    while let Some(&ch) = chars.peek() {
        if ch.is_ascii_digit() {
            numer.push(ch);
            chars.next();
            saw_digits = true;
        } else {
            break;
        }
    }
    if saw_digits {
        let n: num_bigint::BigInt = numer
            .parse()
            .map_err(|_| HError::ParseError(format!("bad integer '{numer}'")))?;
        coeff = Q::from_integer(n);
        if chars.peek() == Some(&'/') {
            chars.next();
            let mut denom = String::new();
            while let Some(&ch) = chars.peek() {
                if ch.is_ascii_digit() {
                    denom.push(ch);
                    chars.next();
                } else {
                    break;
                }
            }
            let d: num_bigint::BigInt = denom
                .parse()
                .map_err(|_| HError::ParseError(format!("bad denominator '{denom}'")))?;
            if d.is_zero() {
                return Err(HError::ParseError("zero denominator".into()));
            }
            coeff /= Q::from_integer(d);
        }
        if chars.peek() == Some(&'*') {
            chars.next();
        }
    }
    let mut mono = CommMono::default();
    let mut saw_var = false;
    while let Some(&ch) = chars.peek() {
        let slot: &mut u32 = match ch {
            't' => {
                chars.next();
                if chars.peek() == Some(&'\'') {
                    chars.next();
                    &mut mono.tp
                } else {
                    &mut mono.t
                }
            }
            'u' => {
                chars.next();
                if chars.peek() == Some(&'\'') {
                    chars.next();
                    &mut mono.up
                } else {
                    &mut mono.u
                }
            }
            _ => break,
        };
        let mut exp = 1u32;
        if chars.peek() == Some(&'^') {
            chars.next();
            let mut digits = String::new();
            while let Some(&c2) = chars.peek() {
                if c2.is_ascii_digit() {
                    digits.push(c2);
                    chars.next();
                } else {
                    break;
                }
            }
            exp = digits
                .parse()
                .map_err(|_| HError::ParseError(format!("bad exponent '{digits}'")))?;
        }
        *slot += exp;
        saw_var = true;
    }
    if !saw_digits && !saw_var {
        return Err(HError::ParseError("expected a term".into()));
    }
    Ok((mono, coeff))
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            render_terms(self.terms.iter().map(|(m, q)| (m.render(), q)))
        )
    }
}

/// t - u.
fn t_minus_u() -> CommPoly {
    CommPoly::var_t().sub(&CommPoly::var_u())
}

/// Sends a^n to (t-u)^n and every other monomial, including e, to zero.
pub fn kappa(w: &Word) -> CommPoly {
    if w.is_e() || w.letters().iter().any(|&l| l != Letter::A) {
        return CommPoly::zero();
    }
    t_minus_u().pow(w.len() as u32)
}

type FgMemo = HashMap<Word, (CommPoly, CommPoly)>;

/// F and G of a single word over a, b (or the unit / e), memoized together.
fn fg_ab_word(w: &Word, memo: &mut FgMemo) -> (CommPoly, CommPoly) {
    if let Some(hit) = memo.get(w) {
        return hit.clone();
    }
    let result = if w.is_e() {
        (CommPoly::zero(), CommPoly::one())
    } else {
        let letters = w.letters();
        let n = letters.len();
        let mut barf = kappa(w);
        // Deleting the letter at position i leaves a valid right leg for
        // kappa only when everything after i is the letter a.
        for i in (0..n).rev() {
            let prefix = Word::from_letters(letters[..i].to_vec());
            let (_, g_prefix) = fg_ab_word(&prefix, memo);
            barf = barf.add(&g_prefix.mul(&t_minus_u().pow((n - 1 - i) as u32)));
            if letters[i] == Letter::B {
                break;
            }
        }
        let f = barf.bar();
        let g = CommPoly::var_u()
            .sub(&CommPoly::var_t())
            .mul(&f)
            .filter_t(|t| 2 * t as usize <= n);
        (f, g)
    };
    memo.insert(w.clone(), result.clone());
    result
}

fn expand_to_ab(p: &NCPoly) -> NCPoly {
    crate::ncpoly::cd_to_ab(p)
}

/// The linear map F.
pub fn f_map(p: &NCPoly) -> CommPoly {
    let mut memo = FgMemo::new();
    let mut out = CommPoly::zero();
    for (w, q) in expand_to_ab(p).terms() {
        let (f, _) = fg_ab_word(w, &mut memo);
        out = out.add(&f.scale(q));
    }
    out
}

/// The linear map G.
pub fn g_map(p: &NCPoly) -> CommPoly {
    let mut memo = FgMemo::new();
    let mut out = CommPoly::zero();
    for (w, q) in expand_to_ab(p).terms() {
        let (_, g) = fg_ab_word(w, &mut memo);
        out = out.add(&g.scale(q));
    }
    out
}

/// The reversing map G*: a monomial of degree n goes to (-1)^(n+1) times G
/// of its reverse; e is fixed by reversal and has degree -1.
pub fn g_star(p: &NCPoly) -> CommPoly {
    let mut out = CommPoly::zero();
    for (w, q) in p.terms() {
        let sign = if (w.degree() + 1).rem_euclid(2) == 0 {
            Q::one()
        } else {
            -Q::one()
        };
        let g = g_map(&NCPoly::from_word(w.reversed()));
        out = out.add(&g.scale(&(sign * q.clone())));
    }
    out
}

/// p(n, k) = C(n, k) - C(n, k-1).
pub fn p_coeff(n: u32, k: u32) -> i64 {
    let choose = |kk: i64| -> i64 {
        if kk < 0 || kk > n as i64 {
            0
        } else {
            binomial(n as i64, kk)
        }
    };
    choose(k as i64) - choose(k as i64 - 1)
}

/// Q_n = sum over k of (-1)^k p(n-1, k) t^k u^(n-1-k), for k up to (n-1)/2.
pub fn q_building_poly(n: u32) -> CommPoly {
    let mut out = CommPoly::zero();
    if n == 0 {
        return out;
    }
    for k in 0..=(n - 1) / 2 {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out.add_term(
            CommMono {
                t: k,
                u: n - 1 - k,
                ..Default::default()
            },
            Q::from_integer((sign * p_coeff(n - 1, k)).into()),
        );
    }
    out
}

/// R_n = Q_n with t and u interchanged.
pub fn r_building_poly(n: u32) -> CommPoly {
    q_building_poly(n).bar()
}

/// T_n vanishes for even n and is the middle term of Q_n otherwise.
pub fn t_building_poly(n: u32) -> CommPoly {
    if n == 0 || n.is_multiple_of(2) {
        return CommPoly::zero();
    }
    let half = (n - 1) / 2;
    let sign = if half.is_multiple_of(2) { 1 } else { -1 };
    CommPoly::from_mono(
        CommMono {
            t: half,
            u: half,
            ..Default::default()
        },
        Q::from_integer((sign * p_coeff(n - 1, half)).into()),
    )
}

/// Splits a cd-word into the runs of c separated by the d letters: the list
/// of run lengths before each d, and the trailing run.
fn cd_runs(w: &Word) -> Option<(Vec<u32>, u32)> {
    let mut before_d = Vec::new();
    let mut run = 0u32;
    for &l in w.letters() {
        match l {
            Letter::C => run += 1,
            Letter::D => {
                before_d.push(run);
                run = 0;
            }
            _ => return None,
        }
    }
    Some((before_d, run))
}

/// F on a cd-monomial by the closed product formula.
pub fn f_closed(w: &Word) -> CommPoly {
    if w.is_e() {
        return CommPoly::zero();
    }
    let (runs, tail) = cd_runs(w).expect("closed formula needs a cd-monomial");
    let r = runs.len() as u32;
    let head = head_factor(tail);
    let mut out = tu_power(r).mul(&head);
    for &k in &runs {
        out = out.mul(&t_building_poly(k + 1));
    }
    out
}

/// G on a cd-monomial by the closed product formula.
pub fn g_closed(w: &Word) -> CommPoly {
    if w.is_e() {
        return CommPoly::one();
    }
    let (runs, tail) = cd_runs(w).expect("closed formula needs a cd-monomial");
    let r = runs.len() as u32;
    let mut out = tu_power(r).mul(&CommPoly::var_u().mul(&q_building_poly(tail + 1)));
    for &k in &runs {
        out = out.mul(&t_building_poly(k + 1));
    }
    out
}

fn tu_power(r: u32) -> CommPoly {
    CommPoly::from_mono(
        CommMono {
            t: r,
            u: r,
            ..Default::default()
        },
        Q::one(),
    )
}

/// t R_n + u Q_n, which is 1 by convention when n = 0.
fn head_factor(n: u32) -> CommPoly {
    if n == 0 {
        CommPoly::one()
    } else {
        CommPoly::var_t()
            .mul(&r_building_poly(n))
            .add(&CommPoly::var_u().mul(&q_building_poly(n)))
    }
}

fn unprime_word(w: &Word) -> Word {
    Word::from_letters(
        w.letters()
            .iter()
            .map(|&l| match l {
                Letter::Cp => Letter::C,
                Letter::Dp => Letter::D,
                other => other,
            })
            .collect(),
    )
}

/// H on a single mixed word: F of the unprimed copy of the primed part when
/// the word carries e, and G of the concatenation otherwise.
pub fn h_omega_word(mw: &MixedWord) -> CommPoly {
    let head = unprime_word(mw.primed());
    if mw.has_e() {
        f_map(&NCPoly::from_word(head))
    } else {
        let whole = head
            .concat(mw.unprimed())
            .expect("cd-letters concatenate freely");
        g_map(&NCPoly::from_word(whole))
    }
}

pub fn h_omega(m: &MixedPoly) -> CommPoly {
    let mut out = CommPoly::zero();
    for (mw, q) in m.terms() {
        out = out.add(&h_omega_word(mw).scale(q));
    }
    out
}

/// L = multiplication after (H tensor G*) after the comodule map.
pub fn l_omega(m: &MixedPoly) -> CommPoly {
    let rho = comodule_rho(m);
    let mut out = CommPoly::zero();
    for ((left, right), q) in rho.terms() {
        let h = h_omega_word(left);
        if h.is_zero() {
            continue;
        }
        let gs = g_star(&NCPoly::from_word(right.clone()));
        out = out.add(&h.mul(&gs).scale(q));
    }
    out
}

/// S_k = 2u^2 sum over j of (-1)^(k-j+1) Q_j Q_(k-j+1).
pub fn s_block(k: u32) -> CommPoly {
    let mut out = CommPoly::zero();
    for j in 1..=k {
        let sign = if (k - j + 1).is_multiple_of(2) { 1 } else { -1 };
        out = out.add(
            &q_building_poly(j)
                .mul(&q_building_poly(k - j + 1))
                .scale(&Q::from_integer(sign.into())),
        );
    }
    CommPoly::from_mono(
        CommMono {
            u: 2,
            ..Default::default()
        },
        Q::from_integer(2.into()),
    )
    .mul(&out)
}

/// S'_(l,k) = 2u^2 sum over j of (-1)^(k-j+1) Q_(l+j) Q_(k-j+1).
pub fn s_prime_block(l: u32, k: u32) -> CommPoly {
    let mut out = CommPoly::zero();
    for j in 1..=k {
        let sign = if (k - j + 1).is_multiple_of(2) { 1 } else { -1 };
        out = out.add(
            &q_building_poly(l + j)
                .mul(&q_building_poly(k - j + 1))
                .scale(&Q::from_integer(sign.into())),
        );
    }
    CommPoly::from_mono(
        CommMono {
            u: 2,
            ..Default::default()
        },
        Q::from_integer(2.into()),
    )
    .mul(&out)
}

/// U_(l,k) = u^2 (Q_(l+2) Q_(k+1) (-1)^(k+1) + Q_(l+1) Q_(k+2) (-1)^(k+2)).
pub fn u_block(l: u32, k: u32) -> CommPoly {
    let sign1 = if (k + 1).is_multiple_of(2) { 1 } else { -1 };
    let sign2 = -sign1;
    let inner = q_building_poly(l + 2)
        .mul(&q_building_poly(k + 1))
        .scale(&Q::from_integer(sign1.into()))
        .add(
            &q_building_poly(l + 1)
                .mul(&q_building_poly(k + 2))
                .scale(&Q::from_integer(sign2.into())),
        );
    CommPoly::from_mono(
        CommMono {
            u: 2,
            ..Default::default()
        },
        Q::one(),
    )
    .mul(&inner)
}

/// The explicit product formula for L on a mixed word without the e marker.
/// Divisions by the T factors are cancelled symbolically against the
/// prefactor before anything is evaluated, so vanishing T factors are safe.
/// When the unprimed part has no d, the two U-term families are empty and
/// the lone c-run plays the role of both the first and the last run; on that
/// branch the formula is known to differ from the compositional map on a few
/// low-degree words.
pub fn l_omega_explicit(mw: &MixedWord) -> CommPoly {
    assert!(!mw.has_e(), "the explicit formula covers words without e");
    let (l_runs, l_tail) = cd_runs(&unprime_word(mw.primed())).expect("primed part is a cd-word");
    let (k_runs, k_tail) = cd_runs(mw.unprimed()).expect("unprimed part is a cd-word");
    let s = l_runs.len() as u32;
    let r = k_runs.len() as u32;
    // m[1..=r] are the runs before each d and m[r+1] is the trailing run;
    // with no d at all the single run is both first and last.
    let mut m = Vec::with_capacity(r as usize + 1);
    m.extend_from_slice(&k_runs);
    m.push(k_tail);
    let m1 = m[0];
    let mlast = *m.last().expect("at least one run");

    let mut primed_factor = tu_power(s);
    for &li in &l_runs {
        primed_factor = primed_factor.mul(&t_building_poly(li + 1));
    }

    // The prefactor carries one T factor per run after the first; with a
    // single run that run is also the trailing one and keeps its T factor.
    let active: Vec<usize> = if r == 0 {
        vec![0]
    } else {
        (1..m.len()).collect()
    };
    let t_product = |skip: &[usize]| -> CommPoly {
        let mut out = CommPoly::one();
        for &idx in &active {
            if !skip.contains(&idx) {
                out = out.mul(&t_building_poly(m[idx] + 1));
            }
        }
        out
    };

    let head = head_factor(l_tail);
    let sign1 = Q::from_integer(if (m1 + 1) % 2 == 0 { 1 } else { -1 }.into());
    let term1 = head
        .mul(&CommPoly::var_u().mul(&q_building_poly(m1 + 1)))
        .scale(&sign1)
        .mul(&t_product(&[]));

    let term2 = t_building_poly(l_tail + m1 + 1)
        .mul(&CommPoly::var_u().mul(&q_building_poly(mlast + 1)))
        .mul(&t_product(&[m.len() - 1]));

    let term3 = s_prime_block(l_tail, m1).mul(&t_product(&[]));

    let mut term4 = CommPoly::zero();
    for idx in 1..m.len() {
        term4 = term4.add(&s_block(m[idx]).mul(&t_product(&[idx])));
    }
    term4 = t_building_poly(l_tail + m1 + 1).mul(&term4);

    let mut tu_terms = CommPoly::zero();
    if r >= 1 {
        let term5 = u_block(l_tail + m1, m[1]).mul(&t_product(&[1]));
        tu_terms = tu_terms.add(&term5);
        let mut term6 = CommPoly::zero();
        for idx in 1..m.len() - 1 {
            term6 = term6.add(&u_block(m[idx], m[idx + 1]).mul(&t_product(&[idx, idx + 1])));
        }
        tu_terms = tu_terms.add(&t_building_poly(l_tail + m1 + 1).mul(&term6));
    }

    let inner = tu_power(r)
        .mul(&term1.add(&term2).add(&term3).add(&term4))
        .add(
            &(if r >= 1 {
                tu_power(r - 1)
            } else {
                CommPoly::zero()
            })
            .mul(&tu_terms),
        );
    primed_factor.mul(&inner)
}

/// Sends an unprimed monomial t^i u^j to t^i t'^(m-i) u^j u'^(m-j).
pub fn prime_shift(p: &CommPoly, m: u32) -> CommPoly {
    let mut out = CommPoly::zero();
    for (mono, q) in p.terms() {
        assert!(
            mono.is_unprimed(),
            "prime shift needs an unprimed polynomial"
        );
        assert!(mono.t <= m && mono.u <= m, "prime shift exponent too small");
        out.add_term(
            CommMono {
                t: mono.t,
                tp: m - mono.t,
                u: mono.u,
                up: m - mono.u,
            },
            q.clone(),
        );
    }
    out
}

/// Substitutes t by tt' and u by uu'.
pub fn double_prime(p: &CommPoly) -> CommPoly {
    let mut out = CommPoly::zero();
    for (mono, q) in p.terms() {
        assert!(
            mono.is_unprimed(),
            "substitution needs an unprimed polynomial"
        );
        out.add_term(
            CommMono {
                t: mono.t,
                tp: mono.t,
                u: mono.u,
                up: mono.u,
            },
            q.clone(),
        );
    }
    out
}

fn l_prime_word(mw: &MixedWord) -> CommPoly {
    let l = l_omega(&MixedPoly::from_word(mw.clone()));
    prime_shift(&l, (mw.degree() + 1) as u32)
}

/// L' rescales L degree by degree into the primed variables.
pub fn l_prime_omega(m: &MixedPoly) -> CommPoly {
    let mut out = CommPoly::zero();
    for (mw, q) in m.terms() {
        out = out.add(&l_prime_word(mw).scale(q));
    }
    out
}

/// G' is G followed by t -> tt', u -> uu'.
pub fn g_prime(p: &NCPoly) -> CommPoly {
    double_prime(&g_map(p))
}

/// H' = multiplication after (L' tensor G') after the comodule map.
pub fn h_prime_omega(m: &MixedPoly) -> CommPoly {
    let rho = comodule_rho(m);
    let mut out = CommPoly::zero();
    for ((left, right), q) in rho.terms() {
        let lp = l_prime_word(left);
        if lp.is_zero() {
            continue;
        }
        let gp = g_prime(&NCPoly::from_word(right.clone()));
        out = out.add(&lp.mul(&gp).scale(q));
    }
    out
}

/// g-polynomials of the lower intervals [min, x] for every x, in index
/// order, by the degree-truncation recursion.
fn g_all_lower(p: &Poset) -> Vec<CommPoly> {
    let mut g = vec![CommPoly::zero(); p.len()];
    for &x in &p.indices_by_rank() {
        let m = p.rank_of(x);
        if m == 0 {
            g[x] = CommPoly::one();
            continue;
        }
        let mut hbar = CommPoly::zero();
        for z in 0..p.len() {
            if z != x && p.leq_idx(z, x) {
                let e = (m - 1 - p.rank_of(z)) as u32;
                hbar = hbar.add(&g[z].mul(&t_minus_u().pow(e)));
            }
        }
        let h = hbar.bar();
        g[x] = CommPoly::var_u()
            .sub(&CommPoly::var_t())
            .mul(&h)
            .filter_t(|t| (2 * t as usize) < m);
    }
    g
}

/// The g-polynomial of an Eulerian poset.
pub fn g_poly(b: &Poset) -> Result<CommPoly, HError> {
    let cls = b.classify();
    if !cls.eulerian {
        return Err(HError::PreconditionFailed(
            "the g-polynomial needs an Eulerian poset".into(),
        ));
    }
    let top = b.max_index().expect("Eulerian posets have a maximum");
    Ok(g_all_lower(b).swap_remove(top))
}

/// The h-polynomial of a lower Eulerian poset.
pub fn h_poly(gamma: &Poset) -> Result<CommPoly, HError> {
    let cls = gamma.classify();
    if !cls.lower_eulerian {
        return Err(HError::PreconditionFailed(
            "the h-polynomial needs a lower Eulerian poset".into(),
        ));
    }
    let g = g_all_lower(gamma);
    let n = gamma.max_rank();
    let mut hbar = CommPoly::zero();
    for x in 0..gamma.len() {
        let e = (n - gamma.rank_of(x)) as u32;
        hbar = hbar.add(&g[x].mul(&t_minus_u().pow(e)));
    }
    Ok(hbar.bar())
}

fn require_sfs_onto_eulerian(map: &PosetMap, what: &str) -> Result<(), HError> {
    let check = is_sfs(map, SfsMethod::Characterization)?;
    if !check.ok {
        return Err(HError::Map(MapError::NotSFS(
            check.witness.unwrap_or_else(|| "no witness".into()),
        )));
    }
    if !map.target().classify().eulerian {
        return Err(HError::PreconditionFailed(format!(
            "{what} needs an Eulerian target"
        )));
    }
    Ok(())
}

/// The local h-polynomial of a strong formal subdivision onto an Eulerian
/// poset: h of each fiber times the signed g of the dual upper interval.
pub fn local_h_poly(map: &PosetMap) -> Result<CommPoly, HError> {
    require_sfs_onto_eulerian(map, "the local h-polynomial")?;
    let b = map.target();
    let n = b.max_rank();
    let top_id = b.id(b.max_index().expect("checked above")).to_string();
    let mut out = CommPoly::zero();
    for x in 0..b.len() {
        let fiber = restrict_below(map, b.id(x))?;
        let h = h_poly(fiber.source())?;
        if h.is_zero() {
            continue;
        }
        let upper = b.interval(b.id(x), Some(&top_id))?;
        let g_dual = g_poly(&upper.dual()?)?;
        let sign = if (n - b.rank_of(x)).is_multiple_of(2) {
            Q::one()
        } else {
            -Q::one()
        };
        out = out.add(&h.mul(&g_dual).scale(&sign));
    }
    Ok(out)
}

/// The mixed h-polynomial of a strong formal subdivision onto an Eulerian
/// poset: prime-shifted local h-polynomials of the fibers against the
/// doubly primed g-polynomials of the upper intervals.
pub fn mixed_h_poly(map: &PosetMap) -> Result<CommPoly, HError> {
    require_sfs_onto_eulerian(map, "the mixed h-polynomial")?;
    let b = map.target();
    let top_id = b.id(b.max_index().expect("checked above")).to_string();
    let mut out = CommPoly::zero();
    for x in 0..b.len() {
        let fiber = restrict_below(map, b.id(x))?;
        let lh = local_h_poly(&fiber)?;
        if lh.is_zero() {
            continue;
        }
        let shifted = prime_shift(&lh, b.rank_of(x) as u32);
        let upper = b.interval(b.id(x), Some(&top_id))?;
        let g_upper = double_prime(&g_poly(&upper)?);
        out = out.add(&shifted.mul(&g_upper));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{barycentric, boolean, polygon};
    use crate::posetmap::build_map;

    fn cp(s: &str) -> CommPoly {
        CommPoly::parse(s).expect("commutative polynomial parses")
    }

    fn mixed_word(s: &str) -> MixedWord {
        let p = MixedPoly::parse(s).expect("mixed word parses");
        let mut terms = p.terms();
        let (w, q) = terms.next().expect("one term");
        assert!(terms.next().is_none() && q.is_one());
        w.clone()
    }

    fn sigma(n: usize) -> PosetMap {
        let b = boolean(n).expect("boolean");
        let (bary, assignment) = barycentric(&b).expect("barycentric");
        build_map(bary, b, &assignment).expect("subdivision map")
    }

    const GOLDEN: &[(&str, &str, &str)] = &[
        ("e", "0", "1"),
        ("1", "1", "u"),
        ("c", "u+t", "u^2"),
        ("c^2", "u^2+t^2", "u^3 - tu^2"),
        ("d", "tu", "tu^2"),
        ("c^3", "u^3 - tu^2 - t^2u + t^3", "u^4 - 2tu^3"),
        ("cd", "0", "0"),
        ("dc", "tu^2 + t^2u", "tu^3"),
        ("c^4", "u^4 - 2tu^3 - 2t^3u + t^4", "u^5 - 3tu^4 + 2t^2u^3"),
        ("c^2d", "-t^2u^2", "-t^2u^3"),
        ("cdc", "0", "0"),
        ("dc^2", "tu^3 + t^3u", "tu^4 - t^2u^3"),
        ("d^2", "t^2u^2", "t^2u^3"),
    ];

    fn parse_rhs(s: &str) -> CommPoly {
        if s == "0" {
            CommPoly::zero()
        } else {
            cp(s)
        }
    }

    #[test]
    fn recursion_reproduces_the_golden_table() {
        for (w, f_str, g_str) in GOLDEN {
            let p = NCPoly::parse(w).unwrap();
            assert_eq!(f_map(&p), parse_rhs(f_str), "F({w})");
            assert_eq!(g_map(&p), parse_rhs(g_str), "G({w})");
        }
    }

    #[test]
    fn closed_formulas_match_the_recursion() {
        for degree in 0..=6 {
            for w in crate::ncpoly::cd_words(degree) {
                let p = NCPoly::from_word(w.clone());
                assert_eq!(f_closed(&w), f_map(&p), "F closed form on {w:?}");
                assert_eq!(g_closed(&w), g_map(&p), "G closed form on {w:?}");
            }
        }
        assert_eq!(f_closed(&Word::e()), CommPoly::zero());
        assert_eq!(g_closed(&Word::e()), CommPoly::one());
    }

    #[test]
    fn g_star_fixtures() {
        assert_eq!(g_star(&NCPoly::letter(Letter::E)), cp("1"));
        assert_eq!(g_star(&NCPoly::one()), cp("-u"));
        assert_eq!(
            g_star(&NCPoly::parse("cd").unwrap()),
            g_map(&NCPoly::parse("dc").unwrap())
        );
    }

    #[test]
    fn h_and_l_fixtures() {
        assert_eq!(h_omega(&MixedPoly::parse("c'e").unwrap()), cp("u+t"));
        assert_eq!(
            h_omega(&MixedPoly::parse("c'c").unwrap()),
            g_map(&NCPoly::parse("c^2").unwrap())
        );
        assert_eq!(l_omega(&MixedPoly::parse("d'e").unwrap()), cp("tu"));
        assert_eq!(
            l_omega(&MixedPoly::parse("d'c'e").unwrap()),
            cp("tu^2 + t^2u")
        );
        assert_eq!(l_omega(&MixedPoly::parse("d'c'").unwrap()), cp("-t^2u^2"));
        assert_eq!(l_omega(&MixedPoly::parse("c'").unwrap()), cp("-tu"));
        assert_eq!(l_omega(&MixedPoly::parse("c").unwrap()), CommPoly::zero());
        assert_eq!(l_omega(&MixedPoly::parse("d").unwrap()), CommPoly::zero());
    }

    #[test]
    fn explicit_l_agrees_when_the_unprimed_part_has_a_d() {
        for s in ["d'd", "c'd", "dc", "d", "c'^2d", "d'cd", "c'dc"] {
            let mw = mixed_word(s);
            assert_eq!(
                l_omega_explicit(&mw),
                l_omega(&MixedPoly::from_word(mw.clone())),
                "explicit L on {s}"
            );
        }
    }

    #[test]
    fn explicit_l_divergences_without_a_d_are_the_known_ones() {
        let unit = MixedWord::unit();
        assert_eq!(l_omega_explicit(&unit), CommPoly::zero());
        assert_eq!(l_omega(&MixedPoly::from_word(unit)), CommPoly::zero());
        let cases = [
            ("c'", "-tu - u^2", "-tu"),
            ("c'^2", "-t^2u - tu^2 - u^3", "-t^2u - tu^2"),
            ("d'c'", "-tu^3 - t^2u^2", "-t^2u^2"),
        ];
        for (s, explicit_str, compositional_str) in cases {
            let mw = mixed_word(s);
            assert_eq!(l_omega_explicit(&mw), cp(explicit_str), "explicit L on {s}");
            assert_eq!(
                l_omega(&MixedPoly::from_word(mw)),
                cp(compositional_str),
                "compositional L on {s}"
            );
        }
    }

    #[test]
    fn primed_map_fixtures() {
        assert_eq!(
            h_prime_omega(&MixedPoly::parse("d").unwrap()),
            cp("tt'u^2u'^2")
        );
        assert_eq!(
            h_prime_omega(&MixedPoly::parse("c^2").unwrap()),
            cp("u^3u'^3 - tt'u^2u'^2")
        );
    }

    #[test]
    fn g_polynomials_of_small_posets() {
        for n in 0..=5 {
            let b = boolean(n).unwrap();
            let expected = CommPoly::from_mono(
                CommMono {
                    u: n as u32,
                    ..Default::default()
                },
                Q::one(),
            );
            assert_eq!(
                g_poly(&b).unwrap(),
                expected,
                "g of the Boolean lattice {n}"
            );
        }
        for n in 3..=6 {
            let p = polygon(n).unwrap();
            let expected = cp(&format!("u^3 + {}*tu^2", n - 3));
            assert_eq!(g_poly(&p).unwrap(), expected, "g of the {n}-gon");
        }
    }

    #[test]
    fn h_polynomials_match_the_flag_route() {
        let s2 = sigma(2).source().clone();
        assert_eq!(h_poly(&s2).unwrap(), cp("u^2 + tu"));
        // F of the ab-index computes the same h-polynomial.
        for p in [
            boolean(3).unwrap(),
            polygon(5).unwrap(),
            s2,
            sigma(3).source().clone(),
        ] {
            let psi = crate::indices::ab_index(&p);
            assert_eq!(
                f_map(&psi),
                h_poly(&p).unwrap(),
                "h via F on {:?}",
                p.name()
            );
        }
    }

    #[test]
    fn g_of_poset_matches_g_of_cd_index() {
        for p in [boolean(4).unwrap(), polygon(5).unwrap()] {
            let phi = crate::indices::cd_index(&p, crate::indices::CdMode::Classic).unwrap();
            assert_eq!(g_map(&phi), g_poly(&p).unwrap());
        }
    }

    #[test]
    fn local_h_fixtures() {
        assert_eq!(local_h_poly(&sigma(2)).unwrap(), cp("tu"));
        let b3 = boolean(3).unwrap();
        let identity = build_map(
            b3.clone(),
            b3.clone(),
            &b3.ids()
                .iter()
                .map(|id| (id.clone(), id.clone()))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert!(local_h_poly(&identity).unwrap().is_zero());
        // The compositional map L lands on the same polynomial.
        for n in 2..=3 {
            let map = sigma(n);
            let omega = crate::indices::mixed_cd_index(&map).unwrap();
            assert_eq!(l_omega(&omega), local_h_poly(&map).unwrap());
        }
    }

    #[test]
    fn mixed_h_fixtures() {
        assert_eq!(mixed_h_poly(&sigma(2)).unwrap(), cp("u^2u'^2 + tt'uu'"));
        let expected3 = cp("u^3u'^3 + 3*tt'u^2u'^2 + tt'^2u^2u' + t^2t'uu'^2");
        assert_eq!(mixed_h_poly(&sigma(3)).unwrap(), expected3);
        for n in 2..=3 {
            let map = sigma(n);
            let omega = crate::indices::mixed_cd_index(&map).unwrap();
            assert_eq!(h_prime_omega(&omega), mixed_h_poly(&map).unwrap());
        }
    }

    #[test]
    fn comm_poly_display_and_parse_round_trip() {
        let p = cp("u^3u'^3 - 2*tt'u^2u'^2 + 1/2*t^2u + 7 - t'");
        let rendered = p.to_string();
        assert_eq!(CommPoly::parse(&rendered).unwrap(), p);
        assert_eq!(cp("tu").to_string(), "tu");
        assert_eq!(CommPoly::zero().to_string(), "0");
        assert_eq!(cp("3").to_string(), "3");
        assert_eq!(cp("-u").to_string(), "-u");
    }
}

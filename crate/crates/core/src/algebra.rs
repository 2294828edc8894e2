//! Exact arithmetic in cyclic groups, prime fields, extension fields given by an
//! explicit modulus polynomial, and direct products of these.
//!
//! Every element is stored as its index in the group's canonical enumeration
//! ([`Elem`]). Residues enumerate numerically; extension-field elements
//! enumerate by coefficient vector with the constant term varying fastest, so
//! the element `c0 + c1 t + c2 t^2` has index `c0 + c1 p + c2 p^2` and the prime
//! subfield occupies indices `0..p`; product elements enumerate
//! lexicographically by `(left, right)`.
//!
//! Fields carry discrete log/exponent tables built from the canonically
//! smallest primitive element, which makes multiplication and cyclotomic class
//! lookup O(1).

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NonPrimeModulus(u64),
    #[error("modulus polynomial {0:?} is reducible over Z_{1}")]
    ReducibleModulus(Vec<u32>, u32),
    #[error("modulus polynomial must be monic after reduction mod {0}")]
    NotMonic(u32),
    #[error("group order {0} is too small")]
    OrderTooSmall(u64),
    #[error("group order {0} does not fit the element encoding")]
    OrderTooLarge(u128),
    #[error("operation requires a field")]
    NotAField,
    #[error("zero has no cyclotomic class or inverse")]
    ZeroElement,
    #[error("field order {q} does not satisfy {requirement}")]
    BadCongruence { q: u32, requirement: &'static str },
    #[error("malformed element: {0}")]
    BadElement(String),
}

/// A group element, stored as its index in the canonical enumeration of its group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serializable description of a group; the JSON form is tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupDescriptor {
    Cyclic { v: u64 },
    Prime { p: u64 },
    /// `modulus` lists coefficients from the constant term up; values are
    /// reduced mod `p` when the group is built.
    Ext { p: u64, modulus: Vec<i64> },
    Product { left: Box<GroupDescriptor>, right: Box<GroupDescriptor> },
}

impl GroupDescriptor {
    pub fn cyclic(v: u64) -> Self {
        GroupDescriptor::Cyclic { v }
    }

    pub fn prime(p: u64) -> Self {
        GroupDescriptor::Prime { p }
    }

    pub fn ext(p: u64, modulus: &[i64]) -> Self {
        GroupDescriptor::Ext { p, modulus: modulus.to_vec() }
    }

    pub fn product(left: GroupDescriptor, right: GroupDescriptor) -> Self {
        GroupDescriptor::Product { left: Box::new(left), right: Box::new(right) }
    }
}

#[derive(Debug, Clone)]
struct FieldTables {
    p: u32,
    degree: usize,
    /// Monic modulus, constant term first, length `degree + 1`.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `0 <= i < q - 1`.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
    primitive: Elem,
}

#[derive(Debug, Clone)]
enum Kind {
    Cyclic,
    Field(FieldTables),
    Product(Box<Group>, Box<Group>),
}

/// An immutable group handle built from a [`GroupDescriptor`].
#[derive(Debug, Clone)]
pub struct Group {
    descriptor: GroupDescriptor,
    order: u32,
    kind: Kind,
}

/// Builds a group handle, checking primality and irreducibility.
pub fn make_group(descriptor: &GroupDescriptor) -> Result<Group, AlgebraError> {
    Group::new(descriptor)
}

impl Group {
    pub fn new(descriptor: &GroupDescriptor) -> Result<Group, AlgebraError> {
        match descriptor {
            GroupDescriptor::Cyclic { v } => {
                if *v < 2 {
                    return Err(AlgebraError::OrderTooSmall(*v));
                }
                let order = u32::try_from(*v).map_err(|_| AlgebraError::OrderTooLarge(*v as u128))?;
                Ok(Group { descriptor: descriptor.clone(), order, kind: Kind::Cyclic })
            }
            GroupDescriptor::Prime { p } => {
                let p = check_prime(*p)?;
                let tables = FieldTables::build(p, vec![0, 1])?;
                Ok(Group { descriptor: descriptor.clone(), order: p, kind: Kind::Field(tables) })
            }
            GroupDescriptor::Ext { p, modulus } => {
                let p = check_prime(*p)?;
                let reduced: Vec<u32> = modulus.iter().map(|&c| c.rem_euclid(p as i64) as u32).collect();
                let mut reduced = reduced;
                while reduced.len() > 1 && *reduced.last().unwrap() == 0 {
                    reduced.pop();
                }
                if *reduced.last().unwrap_or(&0) != 1 {
                    return Err(AlgebraError::NotMonic(p));
                }
                if !is_irreducible(&reduced, p) {
                    return Err(AlgebraError::ReducibleModulus(reduced, p));
                }
                let degree = reduced.len() - 1;
                let q = (p as u128).pow(degree as u32);
                if q > (1u128 << 31) {
                    return Err(AlgebraError::OrderTooLarge(q));
                }
                let tables = FieldTables::build(p, reduced)?;
                Ok(Group { descriptor: descriptor.clone(), order: q as u32, kind: Kind::Field(tables) })
            }
            GroupDescriptor::Product { left, right } => {
                let left = Group::new(left)?;
                let right = Group::new(right)?;
                let order = (left.order as u128) * (right.order as u128);
                if order > u32::MAX as u128 {
                    return Err(AlgebraError::OrderTooLarge(order));
                }
                Ok(Group {
                    descriptor: descriptor.clone(),
                    order: order as u32,
                    kind: Kind::Product(Box::new(left), Box::new(right)),
                })
            }
        }
    }

    pub fn cyclic(v: u64) -> Result<Group, AlgebraError> {
        Group::new(&GroupDescriptor::cyclic(v))
    }

    pub fn prime_field(p: u64) -> Result<Group, AlgebraError> {
        Group::new(&GroupDescriptor::prime(p))
    }

    pub fn extension_field(p: u64, modulus: &[i64]) -> Result<Group, AlgebraError> {
        Group::new(&GroupDescriptor::ext(p, modulus))
    }

    /// Direct product of two already-built groups.
    pub fn product(left: &Group, right: &Group) -> Result<Group, AlgebraError> {
        let order = (left.order as u128) * (right.order as u128);
        if order > u32::MAX as u128 {
            return Err(AlgebraError::OrderTooLarge(order));
        }
        Ok(Group {
            descriptor: GroupDescriptor::product(left.descriptor.clone(), right.descriptor.clone()),
            order: order as u32,
            kind: Kind::Product(Box::new(left.clone()), Box::new(right.clone())),
        })
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    /// Whether both handles share the same additive group and element indexing
    /// (`Z_p` and `F_p` coincide, as do extensions of equal characteristic and degree).
    pub fn same_additive_group(&self, other: &Group) -> bool {
        match (&self.kind, &other.kind) {
            (Kind::Product(a, b), Kind::Product(c, d)) => a.same_additive_group(c) && b.same_additive_group(d),
            (Kind::Product(..), _) | (_, Kind::Product(..)) => false,
            (Kind::Field(f), Kind::Field(g)) => f.p == g.p && f.degree == g.degree,
            (Kind::Field(f), Kind::Cyclic) | (Kind::Cyclic, Kind::Field(f)) => {
                f.degree == 1 && self.order == other.order
            }
            (Kind::Cyclic, Kind::Cyclic) => self.order == other.order,
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self.kind, Kind::Field(_))
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order).map(Elem)
    }

    pub fn contains(&self, x: Elem) -> bool {
        x.0 < self.order
    }

    /// The image of an integer: a residue for cyclic groups, an element of the
    /// prime subfield for fields. Not defined for products.
    pub fn from_int(&self, n: i64) -> Elem {
        match &self.kind {
            Kind::Cyclic => Elem(n.rem_euclid(self.order as i64) as u32),
            Kind::Field(f) => Elem(n.rem_euclid(f.p as i64) as u32),
            Kind::Product(..) => panic!("from_int is not defined on product groups"),
        }
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.kind {
            Kind::Cyclic => Elem(add_mod(a.0, b.0, self.order)),
            Kind::Field(f) => f.add(a, b),
            Kind::Product(l, r) => {
                let (a0, a1) = self.split_with(l, r, a);
                let (b0, b1) = self.split_with(l, r, b);
                Elem(l.add(a0, b0).0 * r.order + r.add(a1, b1).0)
            }
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        match &self.kind {
            Kind::Cyclic => Elem(if a.0 == 0 { 0 } else { self.order - a.0 }),
            Kind::Field(f) => f.neg(a),
            Kind::Product(l, r) => {
                let (a0, a1) = self.split_with(l, r, a);
                Elem(l.neg(a0).0 * r.order + r.neg(a1).0)
            }
        }
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        match &self.kind {
            Kind::Cyclic => Elem(add_mod(a.0, self.order - b.0 % self.order, self.order)),
            Kind::Field(f) => f.add(a, f.neg(b)),
            Kind::Product(..) => self.add(a, self.neg(b)),
        }
    }

    fn split_with(&self, _l: &Group, r: &Group, x: Elem) -> (Elem, Elem) {
        (Elem(x.0 / r.order), Elem(x.0 % r.order))
    }

    /// Components of a product element.
    pub fn split(&self, x: Elem) -> Option<(Elem, Elem)> {
        match &self.kind {
            Kind::Product(l, r) => Some(self.split_with(l, r, x)),
            _ => None,
        }
    }

    pub fn pair(&self, left: Elem, right: Elem) -> Option<Elem> {
        match &self.kind {
            Kind::Product(_, r) => Some(Elem(left.0 * r.order + right.0)),
            _ => None,
        }
    }

    pub fn factors(&self) -> Option<(&Group, &Group)> {
        match &self.kind {
            Kind::Product(l, r) => Some((l, r)),
            _ => None,
        }
    }

    fn field(&self) -> Result<&FieldTables, AlgebraError> {
        match &self.kind {
            Kind::Field(f) => Ok(f),
            _ => Err(AlgebraError::NotAField),
        }
    }

    fn field_unchecked(&self) -> &FieldTables {
        match &self.kind {
            Kind::Field(f) => f,
            _ => panic!("field operation on a non-field group"),
        }
    }

    pub fn one(&self) -> Elem {
        Elem(1)
    }

    /// Field multiplication. Panics on non-field groups.
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.field_unchecked().mul(a, b)
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, AlgebraError> {
        let f = self.field()?;
        if a.0 == 0 {
            return Err(AlgebraError::ZeroElement);
        }
        let n = f.exp.len() as u32;
        Ok(Elem(f.exp[((n - f.log[a.index()]) % n) as usize]))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        let f = self.field_unchecked();
        if a.0 == 0 {
            return if e == 0 { Elem(1) } else { Elem(0) };
        }
        let n = f.exp.len() as u64;
        Elem(f.exp[((f.log[a.index()] as u64 * (e % n)) % n) as usize])
    }

    /// Discrete logarithm to the base of [`Group::primitive_element`].
    pub fn log(&self, a: Elem) -> Result<u32, AlgebraError> {
        let f = self.field()?;
        if a.0 == 0 {
            return Err(AlgebraError::ZeroElement);
        }
        Ok(f.log[a.index()])
    }

    /// Discrete log without error plumbing; `a` must be a nonzero field element.
    #[inline]
    pub(crate) fn log_unchecked(&self, a: Elem) -> u32 {
        self.field_unchecked().log[a.index()]
    }

    /// The canonically smallest element of multiplicative order `q - 1`.
    pub fn primitive_element(&self) -> Result<Elem, AlgebraError> {
        Ok(self.field()?.primitive)
    }

    pub fn characteristic(&self) -> Option<u32> {
        match &self.kind {
            Kind::Field(f) => Some(f.p),
            _ => None,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        match &self.kind {
            Kind::Field(f) => Some(f.degree),
            _ => None,
        }
    }

    /// Coefficients of a field element, constant term first.
    pub fn coefficients(&self, x: Elem) -> Option<Vec<u32>> {
        match &self.kind {
            Kind::Field(f) => Some(f.digits(x.0)),
            _ => None,
        }
    }

    pub fn from_coefficients(&self, coeffs: &[i64]) -> Result<Elem, AlgebraError> {
        let f = self.field()?;
        if coeffs.len() > f.degree {
            return Err(AlgebraError::BadElement(format!(
                "{} coefficients given for a degree {} field",
                coeffs.len(),
                f.degree
            )));
        }
        let mut idx: u32 = 0;
        for &c in coeffs.iter().rev() {
            idx = idx * f.p + c.rem_euclid(f.p as i64) as u32;
        }
        Ok(Elem(idx))
    }

    /// JSON encoding: residues as integers, extension elements as coefficient
    /// arrays (constant first), product elements as `[left, right]`.
    pub fn encode(&self, x: Elem) -> Value {
        match &self.kind {
            Kind::Cyclic => Value::from(x.0),
            Kind::Field(f) if f.degree == 1 => Value::from(x.0),
            Kind::Field(f) => Value::from(f.digits(x.0)),
            Kind::Product(l, r) => {
                let (a, b) = self.split_with(l, r, x);
                Value::Array(vec![l.encode(a), r.encode(b)])
            }
        }
    }

    pub fn decode(&self, v: &Value) -> Result<Elem, AlgebraError> {
        let bad = || AlgebraError::BadElement(v.to_string());
        match &self.kind {
            Kind::Cyclic => {
                let n = v.as_i64().ok_or_else(bad)?;
                Ok(self.from_int(n))
            }
            Kind::Field(f) => match v {
                Value::Number(n) => Ok(self.from_int(n.as_i64().ok_or_else(bad)?)),
                Value::Array(items) => {
                    if f.degree == 1 && items.len() != 1 {
                        return Err(bad());
                    }
                    let coeffs = items
                        .iter()
                        .map(|c| c.as_i64().ok_or_else(bad))
                        .collect::<Result<Vec<_>, _>>()?;
                    self.from_coefficients(&coeffs)
                }
                Value::String(s) => self.parse_element(s),
                _ => Err(bad()),
            },
            Kind::Product(l, r) => {
                let items = v.as_array().ok_or_else(bad)?;
                if items.len() != 2 {
                    return Err(bad());
                }
                let a = l.decode(&items[0])?;
                let b = r.decode(&items[1])?;
                Ok(Elem(a.0 * r.order + b.0))
            }
        }
    }

    /// Parses `"10+7t+11t^2"`-style field notation, or a plain integer.
    pub fn parse_element(&self, s: &str) -> Result<Elem, AlgebraError> {
        let bad = || AlgebraError::BadElement(s.to_string());
        match &self.kind {
            Kind::Cyclic => {
                let n: i64 = s.trim().parse().map_err(|_| bad())?;
                Ok(self.from_int(n))
            }
            Kind::Field(f) => {
                let mut coeffs = vec![0i64; f.degree.max(1)];
                let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
                if compact.is_empty() {
                    return Err(bad());
                }
                let mut terms = Vec::new();
                let mut start = 0;
                for (i, ch) in compact.char_indices() {
                    if (ch == '+' || ch == '-') && i > start {
                        terms.push(&compact[start..i]);
                        start = i;
                    }
                }
                terms.push(&compact[start..]);
                for term in terms {
                    let (sign, body) = match term.strip_prefix('-') {
                        Some(rest) => (-1, rest),
                        None => (1, term.strip_prefix('+').unwrap_or(term)),
                    };
                    let (coef, power) = match body.find('t') {
                        None => (body, 0usize),
                        Some(pos) => {
                            let rest = &body[pos + 1..];
                            let power = if rest.is_empty() {
                                1
                            } else {
                                rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
                            };
                            (body[..pos].trim_end_matches('*'), power)
                        }
                    };
                    let c: i64 = if coef.is_empty() { 1 } else { coef.parse().map_err(|_| bad())? };
                    if power >= coeffs.len() {
                        return Err(bad());
                    }
                    coeffs[power] += sign * c;
                }
                self.from_coefficients(&coeffs)
            }
            Kind::Product(..) => Err(bad()),
        }
    }

    /// Human-readable form, e.g. `4+t` or `10+7t+11t^2`.
    pub fn format(&self, x: Elem) -> String {
        match &self.kind {
            Kind::Cyclic => x.0.to_string(),
            Kind::Field(f) => {
                let digits = f.digits(x.0);
                let mut parts = Vec::new();
                for (i, &c) in digits.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    parts.push(match (i, c) {
                        (0, c) => c.to_string(),
                        (1, 1) => "t".to_string(),
                        (1, c) => format!("{c}t"),
                        (i, 1) => format!("t^{i}"),
                        (i, c) => format!("{c}t^{i}"),
                    });
                }
                if parts.is_empty() {
                    "0".to_string()
                } else {
                    parts.join("+")
                }
            }
            Kind::Product(l, r) => {
                let (a, b) = self.split_with(l, r, x);
                format!("({},{})", l.format(a), r.format(b))
            }
        }
    }
}

impl FieldTables {
    fn build(p: u32, modulus: Vec<u32>) -> Result<FieldTables, AlgebraError> {
        let degree = modulus.len() - 1;
        let q = p.pow(degree as u32);
        if q < 2 {
            return Err(AlgebraError::OrderTooSmall(q as u64));
        }
        let mut tables = FieldTables { p, degree, modulus, exp: Vec::new(), log: Vec::new(), primitive: Elem(1) };
        let n = q - 1;
        let prime_factors = distinct_prime_factors(n as u64);
        let primitive = (1..q)
            .map(Elem)
            .find(|&g| prime_factors.iter().all(|&r| tables.slow_pow(g, (n as u64) / r) != 1))
            .expect("every finite field has a primitive element");
        tables.primitive = primitive;
        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..n {
            exp.push(cur);
            log[cur as usize] = i;
            cur = tables.slow_mul(cur, primitive.0);
        }
        tables.exp = exp;
        tables.log = log;
        Ok(tables)
    }

    fn digits(&self, mut x: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.degree);
        for _ in 0..self.degree {
            out.push(x % self.p);
            x /= self.p;
        }
        out
    }

    fn from_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    #[inline]
    fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.degree == 1 {
            return Elem(add_mod(a.0, b.0, self.p));
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree {
            out += add_mod(x % self.p, y % self.p, self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        Elem(out)
    }

    #[inline]
    fn neg(&self, a: Elem) -> Elem {
        if self.degree == 1 {
            return Elem(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree {
            let d = x % self.p;
            out += (if d == 0 { 0 } else { self.p - d }) * place;
            x /= self.p;
            place *= self.p;
        }
        Elem(out)
    }

    #[inline]
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem(0);
        }
        let n = self.exp.len();
        let s = self.log[a.index()] as usize + self.log[b.index()] as usize;
        Elem(self.exp[if s >= n { s - n } else { s }])
    }

    /// Schoolbook multiplication modulo the modulus polynomial; used only while
    /// the tables are being built.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * self.degree];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for top in (self.degree..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &m) in self.modulus[..self.degree].iter().enumerate() {
                let idx = top - self.degree + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        let digits: Vec<u32> = prod[..self.degree].iter().map(|&d| d as u32).collect();
        self.from_digits(&digits)
    }

    fn slow_pow(&self, base: Elem, mut e: u64) -> u32 {
        let mut acc = 1u32;
        let mut b = base.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, b);
            }
            b = self.slow_mul(b, b);
            e >>= 1;
        }
        acc
    }
}

#[inline]
fn add_mod(a: u32, b: u32, m: u32) -> u32 {
    let s = a as u64 + b as u64;
    let m = m as u64;
    (if s >= m { s - m } else { s }) as u32
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn check_prime(p: u64) -> Result<u32, AlgebraError> {
    if !is_prime(p) || p > u32::MAX as u64 {
        return Err(AlgebraError::NonPrimeModulus(p));
    }
    Ok(p as u32)
}

/// Returns `(p, n)` when `q = p^n` for a prime `p`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = distinct_prime_factors(q);
    if p.len() != 1 {
        return None;
    }
    let mut n = 0;
    let mut r = q;
    while r > 1 {
        r /= p[0];
        n += 1;
    }
    Some((p[0], n))
}

pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m` over Z_p.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let base = r.len() - dm;
        for (i, &c) in m[..dm].iter().enumerate() {
            r[base + i] = (r[base + i] + (p64 - lead) * c as u64) % p64;
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Irreducibility by trial division against every monic polynomial of degree
/// at most half the modulus degree.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let degree = modulus.len() - 1;
    if degree == 0 {
        return false;
    }
    for d in 1..=degree / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                f.push((x % p as u64) as u32);
                x /= p as u64;
            }
            f.push(1);
            if poly_rem(modulus, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// A monic irreducible polynomial of degree `n` over Z_p: the binomial
/// `t^n - c` with the smallest `c` when one exists, otherwise the first in
/// canonical order. Coefficients are listed constant term first.
pub fn default_modulus(p: u64, n: u32) -> Result<Vec<i64>, AlgebraError> {
    let p32 = check_prime(p)?;
    let n = n as usize;
    if n == 1 {
        return Ok(vec![0, 1]);
    }
    let as_i64 = |m: &[u32]| m.iter().map(|&c| c as i64).collect::<Vec<_>>();
    for c in 1..p32 {
        let mut m = vec![0u32; n + 1];
        m[0] = p32 - c;
        m[n] = 1;
        if is_irreducible(&m, p32) {
            return Ok(as_i64(&m));
        }
    }
    let count = (p as u128).pow(n as u32);
    for idx in 0..count {
        let mut m = Vec::with_capacity(n + 1);
        let mut x = idx;
        for _ in 0..n {
            m.push((x % p as u128) as u32);
            x /= p as u128;
        }
        m.push(1);
        if is_irreducible(&m, p32) {
            return Ok(as_i64(&m));
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// The field of order `q`, using `modulus` when given and [`default_modulus`] otherwise.
pub fn field_descriptor(q: u64, modulus: Option<&[i64]>) -> Result<GroupDescriptor, AlgebraError> {
    let (p, n) = prime_power(q).ok_or(AlgebraError::NonPrimeModulus(q))?;
    match modulus {
        Some(m) => Ok(GroupDescriptor::ext(p, m)),
        None if n == 1 => Ok(GroupDescriptor::prime(p)),
        None => Ok(GroupDescriptor::ext(p, &default_modulus(p, n)?)),
    }
}

/// Cyclotomic classes of index `e`: class `i` is `g^i C^e` where `C^e` is the
/// subgroup of `e`-th powers and `g` the field's primitive element.
#[derive(Debug, Clone, Copy)]
pub struct CyclotomicTable<'a> {
    field: &'a Group,
    e: u32,
}

impl<'a> CyclotomicTable<'a> {
    pub fn new(field: &'a Group, e: u32) -> Result<Self, AlgebraError> {
        if !field.is_field() {
            return Err(AlgebraError::NotAField);
        }
        let q = field.order();
        if e == 0 || (q - 1) % e != 0 {
            return Err(AlgebraError::BadCongruence { q, requirement: "e | q - 1" });
        }
        Ok(CyclotomicTable { field, e })
    }

    pub fn field(&self) -> &'a Group {
        self.field
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn primitive(&self) -> Elem {
        self.field.field_unchecked().primitive
    }

    pub fn class_size(&self) -> u32 {
        (self.field.order() - 1) / self.e
    }

    pub fn index(&self, x: Elem) -> Result<u32, AlgebraError> {
        if x.0 == 0 {
            return Err(AlgebraError::ZeroElement);
        }
        Ok(self.field.log_unchecked(x) % self.e)
    }

    /// Class of a nonzero element without the zero check.
    #[inline]
    pub fn index_unchecked(&self, x: Elem) -> u32 {
        self.field.log_unchecked(x) % self.e
    }

    /// Members of class `i` in canonical order.
    pub fn class_members(&self, i: u32) -> Vec<Elem> {
        self.field.elements().skip(1).filter(|&x| self.index_unchecked(x) == i % self.e).collect()
    }
}

/// Cyclotomic class index of `x` relative to the canonical primitive element.
pub fn cyclotomic_index(table: &CyclotomicTable<'_>, x: Elem) -> Result<u32, AlgebraError> {
    table.index(x)
}

/// Choice of coset representatives of `{1, -1}` inside the cubes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransversalMode {
    /// From each coset `{s, -s}` take the canonically smaller element.
    Canonical,
    /// The subgroup of sixth powers; needs `q = 3 (mod 4)`.
    SixthPowers,
}

/// A set `S` with `{s, -s : s in S}` equal to the nonzero cubes, `|S| = (q-1)/6`.
pub fn transversal(field: &Group, mode: TransversalMode) -> Result<Vec<Elem>, AlgebraError> {
    if !field.is_field() {
        return Err(AlgebraError::NotAField);
    }
    let q = field.order();
    if q % 6 != 1 {
        return Err(AlgebraError::BadCongruence { q, requirement: "q = 1 (mod 6)" });
    }
    match mode {
        TransversalMode::Canonical => {
            let cubes = CyclotomicTable::new(field, 3)?;
            let mut taken = vec![false; q as usize];
            let mut out = Vec::with_capacity(((q - 1) / 6) as usize);
            for x in field.elements().skip(1) {
                if cubes.index_unchecked(x) != 0 || taken[x.index()] {
                    continue;
                }
                taken[x.index()] = true;
                taken[field.neg(x).index()] = true;
                out.push(x);
            }
            Ok(out)
        }
        TransversalMode::SixthPowers => {
            if q % 4 != 3 {
                return Err(AlgebraError::BadCongruence { q, requirement: "q = 3 (mod 4)" });
            }
            Ok(CyclotomicTable::new(field, 6)?.class_members(0))
        }
    }
}

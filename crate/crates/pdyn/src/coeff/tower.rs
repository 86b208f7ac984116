//! Coefficients: cyclotomic numbers extended by a tower of square roots.
//!
//! An element is either a cyclotomic number or `a + b·√r` where `√r` is a
//! registered layer and `a`, `b` lie in the field below that layer. Layers form
//! a forest; every layer is a proper quadratic extension of the field generated
//! by its ancestors over a fixed cyclotomic base, so the nested representation
//! is canonical within a chain. Combining elements from two different chains
//! builds their compositum: the layers of the second chain are re-adjoined on
//! top of the first (or identified with square roots already there), with the
//! sign of each root matched through the complex embedding.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_integer::Integer;
use num_traits::{One, Zero};

use super::cyclo::Cyclo;
use super::embed::ComplexBall;
use super::rational::{fmt_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum Coeff {
    Base(Cyclo),
    Ext(Box<ExtNode>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtNode {
    layer: u32,
    a: Coeff,
    b: Coeff,
}

#[derive(Debug)]
struct Layer {
    parent: Option<u32>,
    /// Ancestors including the layer itself, root first.
    chain: Vec<u32>,
    radicand: Coeff,
    base_order: u32,
    branch_imag: bool,
    branch_sign: i8,
}

fn layers() -> &'static RwLock<Vec<Arc<Layer>>> {
    static L: OnceLock<RwLock<Vec<Arc<Layer>>>> = OnceLock::new();
    L.get_or_init(|| RwLock::new(Vec::new()))
}

fn creation_lock() -> &'static Mutex<()> {
    static M: OnceLock<Mutex<()>> = OnceLock::new();
    M.get_or_init(|| Mutex::new(()))
}

fn layer(id: u32) -> Arc<Layer> {
    layers().read().unwrap()[id as usize].clone()
}

/// Number of square-root layers registered so far in this process.
pub fn layer_count() -> usize {
    layers().read().unwrap().len()
}

/// The field an element lives in: the top layer of its chain (if any) and the
/// cyclotomic order of its base coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    pub top: Option<u32>,
    pub order: u32,
}

impl Field {
    pub const RATIONALS: Field = Field { top: None, order: 1 };

    pub fn base_order(&self) -> u32 {
        match self.top {
            Some(k) => layer(k).base_order,
            None => self.order,
        }
    }

    /// The smallest supported field containing both.
    pub fn join(self, other: Field) -> Result<Field> {
        let top = match (self.top, other.top) {
            (None, t) | (t, None) => t,
            (Some(a), Some(b)) => {
                if a == b {
                    Some(a)
                } else if is_ancestor(a, b) {
                    Some(b)
                } else if is_ancestor(b, a) {
                    Some(a)
                } else {
                    Some(merge(a, b)?)
                }
            }
        };
        let order = (self.order as u64).lcm(&(other.order as u64)) as u32;
        if let Some(k) = top {
            let base = layer(k).base_order;
            if !base.is_multiple_of(order) {
                return Err(Error::unsupported(format!(
                    "cyclotomic order {order} is not contained in the base Q(z{base}) of the tower"
                )));
            }
        }
        Ok(Field { top, order })
    }
}

fn is_ancestor(a: u32, b: u32) -> bool {
    layer(b).chain.contains(&a)
}

fn merge_cache() -> &'static Mutex<HashMap<(u32, u32), u32>> {
    static C: OnceLock<Mutex<HashMap<(u32, u32), u32>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn image_cache() -> &'static Mutex<HashMap<(u32, u32), Coeff>> {
    static C: OnceLock<Mutex<HashMap<(u32, u32), Coeff>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Top of a chain whose field contains the fields of chains `a` and `b`.
fn merge(a: u32, b: u32) -> Result<u32> {
    if let Some(&m) = merge_cache().lock().unwrap().get(&(a, b)) {
        return Ok(m);
    }
    let base = layer(a).base_order;
    if layer(b).base_order != base {
        return Err(Error::unsupported(format!(
            "square-root layers {a} and {b} lie over different cyclotomic bases"
        )));
    }
    let mut cur = a;
    for &l in layer(b).chain.iter() {
        if is_ancestor(l, cur) {
            continue;
        }
        let r = into_chain(&layer(l).radicand, Some(cur))?;
        if try_sqrt(&r, Some(cur), base)?.is_some() {
            continue;
        }
        let root = r.sqrt_in(Field { top: Some(cur), order: base })?;
        cur = top_of(&root).expect("a new square root lies in a layer");
    }
    merge_cache().lock().unwrap().insert((a, b), cur);
    Ok(cur)
}

/// The element of chain `top` equal to the registered root of layer `l`.
fn image_of(l: u32, top: u32) -> Result<Coeff> {
    if is_ancestor(l, top) {
        return Ok(ext(l, Coeff::zero(), Coeff::one()));
    }
    if let Some(c) = image_cache().lock().unwrap().get(&(l, top)) {
        return Ok(c.clone());
    }
    let info = layer(l);
    let r = into_chain(&info.radicand, Some(top))?;
    let p = try_sqrt(&r, Some(top), info.base_order)?.ok_or_else(|| {
        Error::unsupported(format!("square-root layer {l} has no image in the chain of layer {top}"))
    })?;
    let mut bits = 128;
    let p = loop {
        let root = layer_root(l, bits);
        let e = p.embed_raw(bits);
        let same = e.sub(&root);
        let opp = e.add(&root);
        let (zs, zo) = (same.contains(&Rational::zero(), &Rational::zero()), opp.contains(&Rational::zero(), &Rational::zero()));
        if zs && !zo {
            break p;
        }
        if zo && !zs {
            break neg_raw(&p);
        }
        bits *= 2;
        if bits > 1 << 16 {
            return Err(Error::unsupported(format!("cannot match the sign of layer {l} numerically")));
        }
    };
    image_cache().lock().unwrap().insert((l, top), p.clone());
    Ok(p)
}

/// `x` rewritten in the chain ending at `top`, whose field must contain it.
fn into_chain(x: &Coeff, top: Option<u32>) -> Result<Coeff> {
    let Some(k) = top_of(x) else {
        return Ok(x.clone());
    };
    let Some(t) = top else {
        return Err(Error::unsupported("element with square-root layers used over the base field".to_string()));
    };
    if is_ancestor(k, t) {
        return Ok(x.clone());
    }
    let Coeff::Ext(e) = x else { unreachable!() };
    let a = into_chain(&e.a, top)?;
    let b = into_chain(&e.b, top)?;
    let root = image_of(e.layer, t)?;
    Ok(add_raw(&a, &mul_raw(&b, &root)))
}

impl PartialEq for Coeff {
    fn eq(&self, o: &Self) -> bool {
        match (self, o) {
            (Coeff::Base(a), Coeff::Base(b)) => a == b,
            (Coeff::Base(_), Coeff::Ext(_)) | (Coeff::Ext(_), Coeff::Base(_)) => false,
            (Coeff::Ext(e), Coeff::Ext(f)) => {
                if e == f {
                    return true;
                }
                if is_ancestor(e.layer, f.layer) || is_ancestor(f.layer, e.layer) {
                    return false;
                }
                self.sub(o).map(|d| d.is_zero()).unwrap_or(false)
            }
        }
    }
}

impl Eq for Coeff {}

impl std::hash::Hash for Coeff {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        // Values in square-root layers have several representations across
        // chains, so only base elements contribute their value.
        match self {
            Coeff::Base(c) => {
                0u8.hash(h);
                c.hash(h);
            }
            Coeff::Ext(_) => 1u8.hash(h),
        }
    }
}

fn top_of(x: &Coeff) -> Option<u32> {
    match x {
        Coeff::Base(_) => None,
        Coeff::Ext(e) => Some(e.layer),
    }
}

/// Whether layer `k` is strictly above every layer of `x`.
fn below(x: &Coeff, k: u32) -> bool {
    match top_of(x) {
        None => true,
        Some(j) => j != k && is_ancestor(j, k),
    }
}

fn ext(layer: u32, a: Coeff, b: Coeff) -> Coeff {
    if b.is_zero() {
        a
    } else {
        Coeff::Ext(Box::new(ExtNode { layer, a, b }))
    }
}

fn add_raw(x: &Coeff, y: &Coeff) -> Coeff {
    match (x, y) {
        (Coeff::Base(a), Coeff::Base(b)) => Coeff::Base(a.add(b)),
        (Coeff::Ext(e), Coeff::Ext(f)) if e.layer == f.layer => {
            ext(e.layer, add_raw(&e.a, &f.a), add_raw(&e.b, &f.b))
        }
        (Coeff::Ext(e), _) if below(y, e.layer) => ext(e.layer, add_raw(&e.a, y), e.b.clone()),
        (_, Coeff::Ext(f)) => ext(f.layer, add_raw(x, &f.a), f.b.clone()),
        _ => unreachable!("incompatible layers reached raw addition"),
    }
}

fn neg_raw(x: &Coeff) -> Coeff {
    match x {
        Coeff::Base(a) => Coeff::Base(a.neg()),
        Coeff::Ext(e) => ext(e.layer, neg_raw(&e.a), neg_raw(&e.b)),
    }
}

fn mul_raw(x: &Coeff, y: &Coeff) -> Coeff {
    match (x, y) {
        (Coeff::Base(a), Coeff::Base(b)) => Coeff::Base(a.mul(b)),
        (Coeff::Ext(e), Coeff::Ext(f)) if e.layer == f.layer => {
            let r = layer(e.layer).radicand.clone();
            let ac = mul_raw(&e.a, &f.a);
            let bd = mul_raw(&e.b, &f.b);
            let ad = mul_raw(&e.a, &f.b);
            let bc = mul_raw(&e.b, &f.a);
            ext(e.layer, add_raw(&ac, &mul_raw(&bd, &r)), add_raw(&ad, &bc))
        }
        (Coeff::Ext(e), _) if below(y, e.layer) => {
            if y.is_zero() {
                return Coeff::zero();
            }
            ext(e.layer, mul_raw(&e.a, y), mul_raw(&e.b, y))
        }
        (_, Coeff::Ext(f)) => {
            if x.is_zero() {
                return Coeff::zero();
            }
            ext(f.layer, mul_raw(x, &f.a), mul_raw(x, &f.b))
        }
        _ => unreachable!("incompatible layers reached raw multiplication"),
    }
}

fn inv_raw(x: &Coeff) -> Result<Coeff> {
    match x {
        Coeff::Base(a) => Ok(Coeff::Base(a.inv()?)),
        Coeff::Ext(e) => {
            let r = layer(e.layer).radicand.clone();
            let norm = add_raw(&mul_raw(&e.a, &e.a), &neg_raw(&mul_raw(&mul_raw(&e.b, &e.b), &r)));
            let ni = inv_raw(&norm)?;
            Ok(ext(e.layer, mul_raw(&e.a, &ni), neg_raw(&mul_raw(&e.b, &ni))))
        }
    }
}

fn scale_raw(x: &Coeff, r: &Rational) -> Coeff {
    match x {
        Coeff::Base(a) => Coeff::Base(a.scale(r)),
        Coeff::Ext(e) => ext(e.layer, scale_raw(&e.a, r), scale_raw(&e.b, r)),
    }
}

/// Square root of `x` within the chain ending at `top` over Q(ζ_base).
fn try_sqrt(x: &Coeff, top: Option<u32>, base: u32) -> Result<Option<Coeff>> {
    if x.is_zero() {
        return Ok(Some(Coeff::zero()));
    }
    let Some(k) = top else {
        return match x {
            Coeff::Base(c) => Ok(c.sqrt_in(base)?.map(Coeff::Base)),
            Coeff::Ext(_) => unreachable!("layered element below an empty chain"),
        };
    };
    let info = layer(k);
    let parent = info.parent;
    let r = &info.radicand;
    match x {
        Coeff::Ext(e) if e.layer == k => {
            let norm = add_raw(&mul_raw(&e.a, &e.a), &neg_raw(&mul_raw(&mul_raw(&e.b, &e.b), r)));
            let Some(s) = try_sqrt(&norm, parent, base)? else {
                return Ok(None);
            };
            let half = Rational::new(1.into(), 2.into());
            for s in [s.clone(), neg_raw(&s)] {
                let h = scale_raw(&add_raw(&e.a, &s), &half);
                if let Some(p) = try_sqrt(&h, parent, base)? {
                    if p.is_zero() {
                        continue;
                    }
                    let q = mul_raw(&e.b, &inv_raw(&scale_raw(&p, &Rational::from_integer(2.into())))?);
                    return Ok(Some(ext(k, p, q)));
                }
            }
            Ok(None)
        }
        _ => {
            if let Some(p) = try_sqrt(x, parent, base)? {
                return Ok(Some(p));
            }
            let xr = mul_raw(x, &inv_raw(r)?);
            if let Some(p) = try_sqrt(&xr, parent, base)? {
                return Ok(Some(ext(k, Coeff::zero(), p)));
            }
            Ok(None)
        }
    }
}

fn layer_root_cache() -> &'static Mutex<HashMap<(u32, u32), ComplexBall>> {
    static C: OnceLock<Mutex<HashMap<(u32, u32), ComplexBall>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn choose_branch(radicand: &Coeff) -> (bool, i8) {
    let mut bits = 160;
    loop {
        let s = radicand.embed_raw(bits).sqrt();
        let imag = s.im_abs_units() > s.re_abs_units();
        if let Some(sign) = s.certified_sign(imag) {
            return (imag, sign);
        }
        bits *= 2;
    }
}

fn layer_root(k: u32, bits: u32) -> ComplexBall {
    if let Some(b) = layer_root_cache().lock().unwrap().get(&(k, bits)) {
        return b.clone();
    }
    let info = layer(k);
    let mut work = bits;
    let root = loop {
        let s = info.radicand.embed_raw(work).sqrt();
        match s.certified_sign(info.branch_imag) {
            Some(sign) if sign == info.branch_sign => break s,
            Some(_) => break s.neg(),
            None => work *= 2,
        }
    };
    let root = if work == bits { root } else { info.radicand.embed_raw(bits).sqrt().pick_like(&root) };
    layer_root_cache().lock().unwrap().insert((k, bits), root.clone());
    root
}

impl ComplexBall {
    /// The one of ±self closest to `reference`; both are computed at different
    /// precisions of the same value.
    fn pick_like(self, reference: &ComplexBall) -> ComplexBall {
        let (r0, i0) = reference.midpoint();
        let (r1, i1) = self.midpoint();
        let same = (&r1 - &r0) * (&r1 - &r0) + (&i1 - &i0) * (&i1 - &i0);
        let opp = (&r1 + &r0) * (&r1 + &r0) + (&i1 + &i0) * (&i1 + &i0);
        if same <= opp {
            self
        } else {
            self.neg()
        }
    }
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::Base(Cyclo::zero())
    }

    pub fn one() -> Self {
        Coeff::Base(Cyclo::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Coeff::Base(Cyclo::from_rational(r))
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn zeta(n: u32, k: i64) -> Self {
        Coeff::Base(Cyclo::zeta(n, k))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coeff::Base(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Coeff::Base(c) if c.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Coeff::Base(c) => c.as_rational(),
            Coeff::Ext(_) => None,
        }
    }

    pub fn as_cyclo(&self) -> Option<&Cyclo> {
        match self {
            Coeff::Base(c) => Some(c),
            Coeff::Ext(_) => None,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Coeff::Base(c) => Field { top: None, order: c.order() },
            Coeff::Ext(e) => {
                let fa = e.a.field();
                let fb = e.b.field();
                let order = (fa.order as u64).lcm(&(fb.order as u64)) as u32;
                Field { top: Some(e.layer), order }
            }
        }
    }

    /// Number of square-root layers in the chain of this element.
    pub fn tower_depth(&self) -> usize {
        match top_of(self) {
            None => 0,
            Some(k) => layer(k).chain.len(),
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if let (Coeff::Base(a), Coeff::Base(b)) = (self, o) {
            return Ok(Coeff::Base(a.add(b)));
        }
        let f = self.field().join(o.field())?;
        Ok(add_raw(&into_chain(self, f.top)?, &into_chain(o, f.top)?))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        neg_raw(self)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if let (Coeff::Base(a), Coeff::Base(b)) = (self, o) {
            return Ok(Coeff::Base(a.mul(b)));
        }
        let f = self.field().join(o.field())?;
        Ok(mul_raw(&into_chain(self, f.top)?, &into_chain(o, f.top)?))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        scale_raw(self, r)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        inv_raw(self)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Coeff::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Square root of `self` in its own field, extending the tower if needed.
    pub fn sqrt(&self) -> Result<Self> {
        self.sqrt_in(self.field())
    }

    /// Square root of `self` taken inside `ctx` (which must contain `self`),
    /// adjoining a new layer above `ctx` when `self` is not a square there.
    pub fn sqrt_in(&self, ctx: Field) -> Result<Self> {
        let ctx = ctx.join(self.field())?;
        let base = ctx.base_order();
        let x = into_chain(self, ctx.top)?;
        let x = &x;
        if let Some(y) = try_sqrt(x, ctx.top, base)? {
            return Ok(y);
        }
        let _guard = creation_lock().lock().unwrap();
        let snapshot: Vec<(u32, Arc<Layer>)> = layers()
            .read()
            .unwrap()
            .iter()
            .enumerate()
            .map(|(i, l)| (i as u32, l.clone()))
            .collect();
        for (id, info) in &snapshot {
            if info.parent == ctx.top && info.base_order == base {
                if &info.radicand == x {
                    return Ok(ext(*id, Coeff::zero(), Coeff::one()));
                }
                let q = mul_raw(x, &inv_raw(&info.radicand)?);
                if let Some(y) = try_sqrt(&q, ctx.top, base)? {
                    return Ok(ext(*id, Coeff::zero(), y));
                }
            }
        }
        let (branch_imag, branch_sign) = choose_branch(x);
        let mut w = layers().write().unwrap();
        let id = w.len() as u32;
        let mut chain = match ctx.top {
            Some(p) => w[p as usize].chain.clone(),
            None => Vec::new(),
        };
        chain.push(id);
        w.push(Arc::new(Layer {
            parent: ctx.top,
            chain,
            radicand: x.clone(),
            base_order: base,
            branch_imag,
            branch_sign,
        }));
        Ok(ext(id, Coeff::zero(), Coeff::one()))
    }

    /// Whether `self` is a square in `ctx` (no layers are created).
    pub fn is_square_in(&self, ctx: Field) -> Result<bool> {
        let ctx = ctx.join(self.field())?;
        Ok(try_sqrt(&into_chain(self, ctx.top)?, ctx.top, ctx.base_order())?.is_some())
    }

    pub(crate) fn embed_raw(&self, bits: u32) -> ComplexBall {
        match self {
            Coeff::Base(c) => {
                let n = c.order();
                let mut acc = ComplexBall::zero(bits);
                for (j, r) in c.coords().iter().enumerate() {
                    if r.is_zero() {
                        continue;
                    }
                    let z = if j == 0 {
                        ComplexBall::exact_int(1, bits)
                    } else {
                        ComplexBall::root_of_unity(n, j as i64, bits)
                    };
                    acc = acc.add(&z.scale_rational(r));
                }
                acc
            }
            Coeff::Ext(e) => {
                let root = layer_root(e.layer, bits);
                e.a.embed_raw(bits).add(&e.b.embed_raw(bits).mul(&root))
            }
        }
    }

    /// Complex embedding with ζ_n ↦ e^{2πi/n} and each layer mapped to its
    /// registered branch of the square root, as a ball of guaranteed radius.
    pub fn embed(&self, precision_bits: u32) -> ComplexBall {
        assert!(precision_bits >= 32, "precision_bits must be at least 32");
        self.embed_raw(precision_bits + 32)
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        let b = self.embed(64);
        num_complex::Complex64::new(b.re_f64(), b.im_f64())
    }

    /// Multiplies by ζ_n^k.
    pub fn mul_zeta(&self, n: u32, k: i64) -> Result<Self> {
        self.mul(&Coeff::zeta(n, k))
    }

    fn is_simple(s: &str) -> bool {
        !s[1..].contains(['+', ' ']) && !s.contains("sqrt")
    }
}

fn wrap(s: String) -> String {
    if Coeff::is_simple(&s) {
        s
    } else {
        format!("({s})")
    }
}

impl std::fmt::Display for Coeff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coeff::Base(c) => write!(f, "{c}"),
            Coeff::Ext(e) => {
                let r = wrap_radicand(&layer(e.layer).radicand);
                let root = format!("sqrt({r})");
                let bpart = if e.b.is_one() {
                    root
                } else if e.b.neg().is_one() {
                    format!("-{root}")
                } else {
                    format!("{}*{root}", wrap(e.b.to_string()))
                };
                if e.a.is_zero() {
                    f.write_str(&bpart)
                } else if let Some(rest) = bpart.strip_prefix('-') {
                    write!(f, "{} - {rest}", e.a)
                } else {
                    write!(f, "{} + {bpart}", e.a)
                }
            }
        }
    }
}

fn wrap_radicand(r: &Coeff) -> String {
    r.to_string()
}

impl From<Rational> for Coeff {
    fn from(r: Rational) -> Self {
        Coeff::from_rational(r)
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::from_i64(n)
    }
}

/// Prints a rational coefficient compactly for use in reports.
pub fn rational_text(r: &Rational) -> String {
    fmt_rational(r)
}

#[allow(dead_code)]
fn assert_send_sync() {
    fn check<T: Send + Sync>() {}
    check::<Coeff>();
    let _ = Rational::one();
}

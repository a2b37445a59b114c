//! Dirichlet characters modulo prime powers, the additive-to-multiplicative
//! basis change `e(-n/p^r) = sum_chi c(chi, p^r) chi(n)`, and the two twist
//! operations on coefficient series.
//!
//! A [`CharacterGroup`] stores a discrete-log table of `(Z/p^r)^*` against a
//! fixed set of cyclic generators and a table of roots of unity. A character
//! is an exponent vector into that group, so evaluation is two table lookups.

use std::sync::Arc;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::arith::{gcd, is_prime, mod_pow, prime_factors};
use crate::error::{Error, Result};
use crate::real::{creal, unit_root, Real};
use crate::series::CoeffSeries;

/// Default bound on `p^r` for character enumeration.
pub const DEFAULT_MODULUS_BOUND: u64 = 1_000_000;

const NOT_COPRIME: u32 = u32::MAX;

/// `(Z/p^r)^*` written as a product of cyclic factors.
#[derive(Debug)]
pub struct CharacterGroup<T: Real> {
    prime: u64,
    exponent: u32,
    modulus: u64,
    orders: Vec<u64>,
    generators: Vec<u64>,
    /// Per residue, one discrete log per cyclic factor.
    dlog: Vec<u32>,
    /// Exponent of the group: every character value is an `lcm`-th root of unity.
    lcm: u64,
    roots: Vec<Complex<T>>,
}

impl<T: Real> CharacterGroup<T> {
    pub fn new(p: u64, r: u32) -> Result<Arc<Self>> {
        Self::with_bound(p, r, DEFAULT_MODULUS_BOUND)
    }

    pub fn with_bound(p: u64, r: u32, bound: u64) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let modulus = match p.checked_pow(r) {
            Some(m) if m <= bound => m,
            Some(m) => return Err(Error::ModulusTooLarge { modulus: m, bound }),
            None => {
                return Err(Error::ModulusTooLarge {
                    modulus: u64::MAX,
                    bound,
                })
            }
        };
        let (orders, generators) = cyclic_decomposition(p, r, modulus);
        let nf = orders.len();
        let mut dlog = vec![NOT_COPRIME; modulus as usize * nf.max(1)];
        if nf == 0 {
            // Trivial group: residue 1 (or 0 modulo 1).
            for x in 0..modulus {
                if gcd(x, modulus) == 1 {
                    dlog[x as usize] = 0;
                }
            }
        } else {
            // Enumerate g_1^{k_1} g_2^{k_2} ... in mixed radix.
            let total: u64 = orders.iter().product();
            for flat in 0..total {
                let mut rest = flat;
                let mut logs = vec![0u64; nf];
                let mut x = 1u64;
                for f in (0..nf).rev() {
                    logs[f] = rest % orders[f];
                    rest /= orders[f];
                    x = (x as u128 * mod_pow(generators[f], logs[f], modulus) as u128
                        % modulus as u128) as u64;
                }
                for (f, &k) in logs.iter().enumerate() {
                    dlog[x as usize * nf + f] = k as u32;
                }
            }
        }
        let lcm = orders.iter().copied().max().unwrap_or(1);
        let roots = (0..lcm).map(|k| unit_root(k as i128, lcm)).collect();
        Ok(Arc::new(CharacterGroup {
            prime: p,
            exponent: r,
            modulus,
            orders,
            generators,
            dlog,
            lcm,
            roots,
        }))
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// `r` in `p^r`.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `phi(p^r)`.
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// Discrete logs of `n` against the generators, `None` if `p | n`.
    pub fn discrete_log(&self, n: u64) -> Option<Vec<u64>> {
        let nf = self.orders.len();
        let x = (n % self.modulus) as usize;
        if self.dlog[x * nf.max(1)] == NOT_COPRIME {
            return None;
        }
        Some((0..nf).map(|f| self.dlog[x * nf + f] as u64).collect())
    }

    /// Index into the root table of `chi_e(n)`.
    fn phase(&self, exponents: &[u64], n: u64) -> Option<u64> {
        let nf = self.orders.len();
        let x = (n % self.modulus) as usize;
        if self.dlog[x * nf.max(1)] == NOT_COPRIME {
            return None;
        }
        let mut acc: u128 = 0;
        for f in 0..nf {
            let k = self.dlog[x * nf + f] as u128;
            acc += exponents[f] as u128 * k * (self.lcm / self.orders[f]) as u128;
        }
        Some((acc % self.lcm as u128) as u64)
    }

    /// Generators of `U_f = {n = 1 mod p^f}` inside this group.
    fn kernel_generators(&self, f: u32) -> Vec<u64> {
        if f >= self.exponent {
            return Vec::new();
        }
        let whole = f == 0 || (self.prime == 2 && f == 1);
        if whole {
            self.generators.clone()
        } else {
            vec![(1 + self.prime.pow(f)) % self.modulus]
        }
    }

    /// All characters, principal first, then lexicographic in exponents.
    pub fn characters(self: &Arc<Self>) -> Vec<DirichletCharacter<T>> {
        let nf = self.orders.len();
        let total = self.order() as usize;
        let mut out = Vec::with_capacity(total);
        let mut e = vec![0u64; nf];
        for _ in 0..total {
            out.push(DirichletCharacter::from_exponents(self.clone(), e.clone()));
            for f in (0..nf).rev() {
                e[f] += 1;
                if e[f] < self.orders[f] {
                    break;
                }
                e[f] = 0;
            }
        }
        out
    }
}

fn primitive_root_mod_prime(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

fn cyclic_decomposition(p: u64, r: u32, modulus: u64) -> (Vec<u64>, Vec<u64>) {
    if r == 0 {
        return (Vec::new(), Vec::new());
    }
    if p == 2 {
        return match r {
            1 => (Vec::new(), Vec::new()),
            2 => (vec![2], vec![3]),
            _ => (vec![2, 1 << (r - 2)], vec![modulus - 1, 5]),
        };
    }
    let mut g = primitive_root_mod_prime(p);
    if r >= 2 && mod_pow(g, p - 1, p * p) == 1 {
        g += p;
    }
    let phi = modulus / p * (p - 1);
    (vec![phi], vec![g])
}

/// Dirichlet character modulo `p^r`.
#[derive(Clone, Debug)]
pub struct DirichletCharacter<T: Real> {
    group: Arc<CharacterGroup<T>>,
    exponents: Vec<u64>,
    conductor: u64,
}

impl<T: Real> PartialEq for DirichletCharacter<T> {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus == other.group.modulus
            && self.group.prime == other.group.prime
            && self.exponents == other.exponents
    }
}

impl<T: Real> DirichletCharacter<T> {
    fn from_exponents(group: Arc<CharacterGroup<T>>, exponents: Vec<u64>) -> Self {
        let mut ch = DirichletCharacter {
            group,
            exponents,
            conductor: 0,
        };
        ch.conductor = ch.compute_conductor();
        ch
    }

    /// The character `n -> 1` modulo 1.
    pub fn trivial(p: u64) -> Result<Self> {
        let group = CharacterGroup::new(p, 0)?;
        Ok(Self::from_exponents(group, Vec::new()))
    }

    fn compute_conductor(&self) -> u64 {
        let g = &self.group;
        for f in 0..=g.exponent {
            let trivial_on_kernel = g
                .kernel_generators(f)
                .iter()
                .all(|&x| g.phase(&self.exponents, x) == Some(0));
            if trivial_on_kernel {
                return g.prime.pow(f);
            }
        }
        g.modulus
    }

    pub fn group(&self) -> &Arc<CharacterGroup<T>> {
        &self.group
    }

    pub fn prime(&self) -> u64 {
        self.group.prime
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_principal(&self) -> bool {
        self.conductor == 1
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.group.modulus
    }

    /// Multiplicative order of the character.
    pub fn order(&self) -> u64 {
        self.exponents
            .iter()
            .zip(&self.group.orders)
            .map(|(&e, &o)| o / gcd(e, o))
            .fold(1, |acc, x| acc / gcd(acc, x) * x)
    }

    pub fn value(&self, n: u64) -> Complex<T> {
        match self.group.phase(&self.exponents, n) {
            Some(k) => self.group.roots[k as usize],
            None => Complex::zero(),
        }
    }

    /// Values on residues `1..=p^r` (index `n - 1`).
    pub fn values(&self) -> Vec<Complex<T>> {
        (1..=self.group.modulus).map(|n| self.value(n)).collect()
    }

    pub fn conj(&self) -> Self {
        let exponents = self
            .exponents
            .iter()
            .zip(&self.group.orders)
            .map(|(&e, &o)| (o - e) % o)
            .collect();
        DirichletCharacter {
            group: self.group.clone(),
            exponents,
            conductor: self.conductor,
        }
    }
}

/// `phi(p^r)` characters of `(Z/p^r)^*`, principal first.
pub fn enumerate_characters<T: Real>(p: u64, r: u32) -> Result<Vec<DirichletCharacter<T>>> {
    if r == 0 {
        return Err(Error::InvalidArgument("exponent r must be positive".into()));
    }
    Ok(CharacterGroup::new(p, r)?.characters())
}

/// The primitive character inducing `chi`, of modulus `conductor(chi)`.
pub fn primitive_inducer<T: Real>(chi: &DirichletCharacter<T>) -> DirichletCharacter<T> {
    if chi.is_primitive() {
        return chi.clone();
    }
    let g = &chi.group;
    let f = crate::arith::ilog(g.prime, chi.conductor);
    let small = CharacterGroup::<T>::new(g.prime, f).expect("conductor divides a valid modulus");
    let exponents = small
        .generators
        .iter()
        .zip(&small.orders)
        .map(|(&gen, &ord)| {
            let phase = g
                .phase(&chi.exponents, gen)
                .expect("generator is coprime to p");
            let scaled = phase as u128 * ord as u128;
            debug_assert_eq!(scaled % g.lcm as u128, 0);
            (scaled / g.lcm as u128) as u64
        })
        .collect();
    DirichletCharacter::from_exponents(small, exponents)
}

// ---------------------------------------------------------------------------
// additive basis

/// Coefficients `c(chi, p^r)` with `e(-n/p^r) = sum_chi c(chi, p^r) chi(n)`
/// for `(n, p) = 1`, stored in the order of [`CharacterGroup::characters`].
#[derive(Clone, Debug)]
pub struct AdditiveTwistBasis<T: Real> {
    pub characters: Vec<DirichletCharacter<T>>,
    pub coefficients: Vec<Complex<T>>,
}

impl<T: Real> AdditiveTwistBasis<T> {
    pub fn modulus(&self) -> u64 {
        self.characters[0].modulus()
    }

    pub fn principal_coefficient(&self) -> Complex<T> {
        self.coefficients[0]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DirichletCharacter<T>, Complex<T>)> {
        self.characters.iter().zip(self.coefficients.iter().copied())
    }

    /// `sum_chi c(chi) chi(n)`.
    pub fn reconstruct(&self, n: u64) -> Complex<T> {
        self.iter()
            .fold(Complex::zero(), |acc, (chi, c)| acc + c * chi.value(n))
    }

    /// `sum_chi |c(chi)|^2`.
    pub fn parseval(&self) -> T {
        self.coefficients
            .iter()
            .fold(T::zero(), |acc, c| acc + c.re * c.re + c.im * c.im)
    }
}

/// `c(chi, p^r) = phi(p^r)^{-1} sum_{(n,p)=1} e(-n/p^r) conj(chi(n))`,
/// evaluated for all characters at once as a DFT over the group.
pub fn additive_basis<T: Real>(p: u64, r: u32) -> Result<AdditiveTwistBasis<T>> {
    if r == 0 {
        return Err(Error::InvalidArgument("exponent r must be positive".into()));
    }
    let group = CharacterGroup::<T>::new(p, r)?;
    let characters = group.characters();
    let orders = group.orders.clone();
    let total = group.order() as usize;
    let modulus = group.modulus;

    // x[k_1, ..., k_f] = e(-g_1^{k_1} ... g_f^{k_f} / p^r), row-major.
    let mut x = vec![Complex::<T>::zero(); total];
    for n in 1..modulus.max(2) {
        if let Some(logs) = group.discrete_log(n) {
            let flat = logs
                .iter()
                .zip(&orders)
                .fold(0usize, |acc, (&k, &o)| acc * o as usize + k as usize);
            x[flat] = unit_root(-(n as i128), modulus);
        }
    }
    if orders.is_empty() {
        // Modulus 2: the single residue 1.
        x[0] = unit_root(-1, modulus);
    }

    // chi_e(g^k) = e(sum e_f k_f / o_f); conj gives the forward DFT sign.
    let mut stride = total;
    for &o in &orders {
        let len = o as usize;
        stride /= len;
        let mut buf = vec![Complex::<T>::zero(); len];
        for block in 0..total / (len * stride) {
            for inner in 0..stride {
                let base = block * len * stride + inner;
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = x[base + i * stride];
                }
                let out = dft_forward(&buf);
                for (i, v) in out.into_iter().enumerate() {
                    x[base + i * stride] = v;
                }
            }
        }
    }
    let inv = creal(T::one() / T::from_i128(total as i128));
    let coefficients = x.into_iter().map(|v| v * inv).collect();
    Ok(AdditiveTwistBasis {
        characters,
        coefficients,
    })
}

/// `X_j = sum_k x_k e(-jk/n)`.
fn dft_forward<T: Real>(x: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = x.len();
    if n <= 64 {
        return (0..n)
            .map(|j| {
                x.iter().enumerate().fold(Complex::zero(), |acc, (k, &xk)| {
                    acc + xk * unit_root::<T>(-((j * k % n) as i128), n as u64)
                })
            })
            .collect();
    }
    if n.is_power_of_two() {
        let mut a = x.to_vec();
        fft_pow2(&mut a, false);
        return a;
    }
    bluestein(x)
}

/// In-place radix-2 FFT; `inverse` flips the sign and does not normalize.
fn fft_pow2<T: Real>(a: &mut [Complex<T>], inverse: bool) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let sign: i128 = if inverse { 1 } else { -1 };
    let twiddles: Vec<Complex<T>> = (0..n / 2)
        .map(|k| unit_root(sign * k as i128, n as u64))
        .collect();
    let mut len = 2;
    while len <= n {
        let step = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = twiddles[k * step];
                let u = a[start + k];
                let v = a[start + k + len / 2] * w;
                a[start + k] = u + v;
                a[start + k + len / 2] = u - v;
            }
        }
        len <<= 1;
    }
}

/// Arbitrary-length DFT as a chirp convolution.
fn bluestein<T: Real>(x: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = x.len();
    let two_n = 2 * n as u64;
    // chirp_k = e(-k^2 / 2n)
    let chirp: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let k2 = (k as u128 * k as u128 % two_n as u128) as i128;
            unit_root(-k2, two_n)
        })
        .collect();
    let m = (2 * n - 1).next_power_of_two();
    let mut a = vec![Complex::<T>::zero(); m];
    let mut b = vec![Complex::<T>::zero(); m];
    for k in 0..n {
        a[k] = x[k] * chirp[k];
        b[k] = chirp[k].conj();
        if k > 0 {
            b[m - k] = chirp[k].conj();
        }
    }
    fft_pow2(&mut a, false);
    fft_pow2(&mut b, false);
    for (ai, bi) in a.iter_mut().zip(&b) {
        *ai *= *bi;
    }
    fft_pow2(&mut a, true);
    let scale = creal(T::one() / T::from_i128(m as i128));
    (0..n).map(|k| a[k] * scale * chirp[k]).collect()
}

// ---------------------------------------------------------------------------
// twists

/// `F^chi`: coefficient `a(n) chi(n)`.
pub fn twist<T: Real>(series: &CoeffSeries<T>, chi: &DirichletCharacter<T>) -> CoeffSeries<T> {
    series.pointwise(|n| chi.value(n as u64))
}

/// `F(s, num/den)`: coefficient `a(n) e(-n num/den)`.
pub fn linear_twist<T: Real>(series: &CoeffSeries<T>, num: i64, den: u64) -> Result<CoeffSeries<T>> {
    if den == 0 {
        return Err(Error::ZeroDenominator);
    }
    let g = gcd(num.unsigned_abs(), den).max(1);
    let num = num / g as i64;
    let den = den / g;
    let reduced = num.rem_euclid(den as i64) as u128;
    if den as usize <= 2 * series.len() {
        let table: Vec<Complex<T>> = (0..den).map(|k| unit_root(-(k as i128), den)).collect();
        Ok(series.pointwise(|n| table[(n as u128 * reduced % den as u128) as usize]))
    } else {
        Ok(series.pointwise(|n| unit_root(-((n as u128 * reduced % den as u128) as i128), den)))
    }
}

/// Checks `chi(mn) = chi(m) chi(n)` and `|chi(n)| = 1` on all coprime pairs.
pub fn multiplicativity_defect<T: Real>(chi: &DirichletCharacter<T>) -> f64 {
    let q = chi.modulus();
    let mut worst: f64 = 0.0;
    for m in 1..=q {
        let cm = chi.value(m);
        for n in 1..=q {
            let cn = chi.value(n);
            let cmn = chi.value(m * n);
            worst = worst.max(crate::real::cabs_f64(cmn - cm * cn));
        }
        if gcd(m, q) == 1 {
            worst = worst.max((crate::real::cabs_f64(cm) - 1.0).abs());
        }
    }
    worst.max(crate::real::cabs_f64(chi.value(1) - Complex::one()))
}

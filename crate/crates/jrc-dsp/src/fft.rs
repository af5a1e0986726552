//! Mixed-radix FFT (radices 2/3/4/5) with a Bluestein fallback for other
//! lengths.
//!
//! All the natural buffer sizes in this simulator (pulse grids, beat
//! captures, OFDM symbols) are 5-smooth, so the Stockham path handles the
//! hot loops; Bluestein keeps arbitrary user lengths correct.
//!
//! Transforms here are unnormalized; [`crate::signal`] wraps them in the
//! unitary (1/sqrt(N) each way) convention used by the public API.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Planned FFT for a fixed length.
///
/// Holds the twiddle table (and Bluestein machinery when the length is not
/// 5-smooth) so repeated transforms of one length share setup cost.
pub struct Fft {
    n: usize,
    kind: Kind,
}

enum Kind {
    /// 5-smooth length: Stockham autosort, radix stages high-to-low.
    Smooth {
        /// e^(-2*pi*i*k/n) for k in 0..n.
        master: Vec<Complex64>,
        stages: Vec<usize>,
    },
    Bluestein(Bluestein),
    Trivial,
}

struct Bluestein {
    /// Padded 5-smooth length m >= 2n-1.
    inner: alloc::boxed::Box<Fft>,
    /// Forward chirp a_n = e^(-i*pi*n^2/N).
    chirp: Vec<Complex64>,
    /// FFT of the circularly wrapped conjugate chirp.
    kernel_fft: Vec<Complex64>,
}

impl Fft {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "FFT length must be nonzero");
        if n == 1 {
            return Self { n, kind: Kind::Trivial };
        }
        if is_five_smooth(n) {
            let master = master_table(n);
            let stages = factor_stages(n);
            Self { n, kind: Kind::Smooth { master, stages } }
        } else {
            Self { n, kind: Kind::Bluestein(Bluestein::new(n)) }
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Unnormalized forward DFT, in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.n, "FFT plan/data length mismatch");
        match &self.kind {
            Kind::Trivial => {}
            Kind::Smooth { master, stages } => stockham(data, master, stages),
            Kind::Bluestein(b) => b.forward(data),
        }
    }

    /// Unnormalized inverse DFT (no 1/N), in place.
    ///
    /// Uses the conjugation identity so forward and inverse share one code
    /// path and one twiddle table.
    pub fn inverse(&self, data: &mut [Complex64]) {
        for v in data.iter_mut() {
            *v = v.conj();
        }
        self.forward(data);
        for v in data.iter_mut() {
            *v = v.conj();
        }
    }
}

/// Smallest 5-smooth integer >= n. Used to pad linear convolutions.
pub fn next_fast_len(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        if is_five_smooth(m) {
            return m;
        }
        m += 1;
    }
}

fn is_five_smooth(mut n: usize) -> bool {
    for p in [2usize, 3, 5] {
        while n % p == 0 {
            n /= p;
        }
    }
    n == 1
}

fn factor_stages(mut n: usize) -> Vec<usize> {
    let mut stages = Vec::new();
    while n % 4 == 0 {
        stages.push(4);
        n /= 4;
    }
    for p in [2usize, 3, 5] {
        while n % p == 0 {
            stages.push(p);
            n /= p;
        }
    }
    debug_assert_eq!(n, 1);
    stages
}

fn master_table(n: usize) -> Vec<Complex64> {
    let step = -2.0 * core::f64::consts::PI / n as f64;
    (0..n)
        .map(|k| {
            let (s, c) = libm::sincos(step * k as f64);
            Complex64::new(c, s)
        })
        .collect()
}

#[inline]
fn mul_j(z: Complex64) -> Complex64 {
    Complex64::new(-z.im, z.re)
}

/// Stockham autosort mixed-radix DIF.
///
/// Stage invariant: sub-transform size `len` starts at n and divides by the
/// radix each stage while the stride `s` multiplies, so `len * s == n`
/// throughout and every stage twiddle e^(-2*pi*i*p*k/len) is the master
/// table entry at index p*k*s.
fn stockham(data: &mut [Complex64], master: &[Complex64], stages: &[usize]) {
    let n = data.len();
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    let mut src: &mut [Complex64] = data;
    let mut dst: &mut [Complex64] = &mut scratch;
    let mut in_data = true;

    let mut len = n;
    let mut stride = 1usize;
    for &r in stages {
        let m = len / r;
        match r {
            2 => stage2(src, dst, m, stride, master, n),
            3 => stage3(src, dst, m, stride, master, n),
            4 => stage4(src, dst, m, stride, master, n),
            5 => stage5(src, dst, m, stride, master, n),
            _ => unreachable!(),
        }
        core::mem::swap(&mut src, &mut dst);
        in_data = !in_data;
        len = m;
        stride *= r;
    }
    if !in_data {
        dst.copy_from_slice(src);
    }
}

fn stage2(
    x: &[Complex64],
    y: &mut [Complex64],
    m: usize,
    s: usize,
    master: &[Complex64],
    n: usize,
) {
    for p in 0..m {
        let w = master[(p * s) % n];
        for q in 0..s {
            let a = x[q + s * p];
            let b = x[q + s * (p + m)];
            y[q + s * 2 * p] = a + b;
            y[q + s * (2 * p + 1)] = (a - b) * w;
        }
    }
}

fn stage3(
    x: &[Complex64],
    y: &mut [Complex64],
    m: usize,
    s: usize,
    master: &[Complex64],
    n: usize,
) {
    const C: f64 = -0.5;
    const S: f64 = 0.866_025_403_784_438_6;
    for p in 0..m {
        let w1 = master[(p * s) % n];
        let w2 = master[(2 * p * s) % n];
        for q in 0..s {
            let a0 = x[q + s * p];
            let a1 = x[q + s * (p + m)];
            let a2 = x[q + s * (p + 2 * m)];
            let t = a1 + a2;
            let d = mul_j(a1 - a2) * S;
            let mc = a0 + t * C;
            y[q + s * 3 * p] = a0 + t;
            y[q + s * (3 * p + 1)] = (mc - d) * w1;
            y[q + s * (3 * p + 2)] = (mc + d) * w2;
        }
    }
}

fn stage4(
    x: &[Complex64],
    y: &mut [Complex64],
    m: usize,
    s: usize,
    master: &[Complex64],
    n: usize,
) {
    for p in 0..m {
        let w1 = master[(p * s) % n];
        let w2 = master[(2 * p * s) % n];
        let w3 = master[(3 * p * s) % n];
        for q in 0..s {
            let a0 = x[q + s * p];
            let a1 = x[q + s * (p + m)];
            let a2 = x[q + s * (p + 2 * m)];
            let a3 = x[q + s * (p + 3 * m)];
            let t0 = a0 + a2;
            let t1 = a0 - a2;
            let t2 = a1 + a3;
            let t3 = mul_j(a1 - a3);
            y[q + s * 4 * p] = t0 + t2;
            y[q + s * (4 * p + 1)] = (t1 - t3) * w1;
            y[q + s * (4 * p + 2)] = (t0 - t2) * w2;
            y[q + s * (4 * p + 3)] = (t1 + t3) * w3;
        }
    }
}

fn stage5(
    x: &[Complex64],
    y: &mut [Complex64],
    m: usize,
    s: usize,
    master: &[Complex64],
    n: usize,
) {
    const C1: f64 = 0.309_016_994_374_947_45;
    const S1: f64 = 0.951_056_516_295_153_5;
    const C2: f64 = -0.809_016_994_374_947_5;
    const S2: f64 = 0.587_785_252_292_473_1;
    for p in 0..m {
        let w1 = master[(p * s) % n];
        let w2 = master[(2 * p * s) % n];
        let w3 = master[(3 * p * s) % n];
        let w4 = master[(4 * p * s) % n];
        for q in 0..s {
            let a0 = x[q + s * p];
            let a1 = x[q + s * (p + m)];
            let a2 = x[q + s * (p + 2 * m)];
            let a3 = x[q + s * (p + 3 * m)];
            let a4 = x[q + s * (p + 4 * m)];
            let t1 = a1 + a4;
            let t2 = a2 + a3;
            let d1 = a1 - a4;
            let d2 = a2 - a3;
            let m1 = a0 + t1 * C1 + t2 * C2;
            let m2 = a0 + t1 * C2 + t2 * C1;
            let j1 = mul_j(d1 * S1 + d2 * S2);
            let j2 = mul_j(d1 * S2 - d2 * S1);
            y[q + s * 5 * p] = a0 + t1 + t2;
            y[q + s * (5 * p + 1)] = (m1 - j1) * w1;
            y[q + s * (5 * p + 2)] = (m2 - j2) * w2;
            y[q + s * (5 * p + 3)] = (m2 + j2) * w3;
            y[q + s * (5 * p + 4)] = (m1 + j1) * w4;
        }
    }
}

impl Bluestein {
    fn new(n: usize) -> Self {
        let m = next_fast_len(2 * n - 1);
        let inner = alloc::boxed::Box::new(Fft::new(m));
        // Phase pi*k^2/n reduced exactly: k^2 mod 2n keeps the argument
        // small so sincos stays accurate for large k.
        let chirp: Vec<Complex64> = (0..n)
            .map(|k| {
                let k2 = ((k as u128 * k as u128) % (2 * n as u128)) as f64;
                let (s, c) = libm::sincos(-core::f64::consts::PI * k2 / n as f64);
                Complex64::new(c, s)
            })
            .collect();
        let mut kernel = vec![Complex64::new(0.0, 0.0); m];
        for k in 0..n {
            let v = chirp[k].conj();
            kernel[k] = v;
            if k > 0 {
                kernel[m - k] = v;
            }
        }
        inner.forward(&mut kernel);
        Self { inner, chirp, kernel_fft: kernel }
    }

    fn forward(&self, data: &mut [Complex64]) {
        let n = data.len();
        let m = self.inner.len();
        let mut work = vec![Complex64::new(0.0, 0.0); m];
        for k in 0..n {
            work[k] = data[k] * self.chirp[k];
        }
        self.inner.forward(&mut work);
        for (w, k) in work.iter_mut().zip(self.kernel_fft.iter()) {
            *w *= k;
        }
        self.inner.inverse(&mut work);
        let scale = 1.0 / m as f64;
        for k in 0..n {
            data[k] = work[k] * self.chirp[k] * scale;
        }
    }
}

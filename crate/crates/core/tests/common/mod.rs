#![allow(dead_code)]

use egth::{MarkovRenewalProcess, MfptMatrix, SquareMatrix, StochasticMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random irreducible chain: a random Hamiltonian cycle with positive
/// weight plus sparse random weights elsewhere, rows normalised.
pub fn random_chain(rng: &mut impl Rng, n: usize, density: f64) -> StochasticMatrix<f64> {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut w = vec![vec![0.0f64; n]; n];
    for a in 0..n {
        let (i, j) = (order[a], order[(a + 1) % n]);
        w[i][j] = rng.gen_range(0.05..1.0);
    }
    for row in w.iter_mut() {
        for x in row.iter_mut() {
            if rng.gen_bool(density) {
                *x += rng.gen_range(0.0..1.0);
            }
        }
    }
    let rows: Vec<Vec<f64>> = w
        .into_iter()
        .map(|row| {
            let s: f64 = row.iter().sum();
            row.into_iter().map(|x| x / s).collect()
        })
        .collect();
    egth::validate_stochastic(&rows, 1e-12).expect("normalised rows")
}

pub fn random_mrp(rng: &mut impl Rng, n: usize) -> MarkovRenewalProcess<f64> {
    let density = rng.gen_range(0.1..0.9);
    let p = random_chain(rng, n, density);
    let mu = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
    MarkovRenewalProcess::new(p, mu).unwrap()
}

pub fn random_markov_chain(rng: &mut impl Rng, n: usize) -> MarkovRenewalProcess<f64> {
    let density = rng.gen_range(0.1..0.9);
    MarkovRenewalProcess::markov_chain(random_chain(rng, n, density))
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
            .unwrap();
        a.swap(c, piv);
        b.swap(c, piv);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// Stationary vector by replacing one balance equation with normalisation.
pub fn dense_stationary(p: &StochasticMatrix<f64>) -> Vec<f64> {
    let n = p.n();
    let mut a = vec![vec![0.0; n]; n];
    for j in 0..n {
        for i in 0..n {
            a[j][i] = if i == j { 1.0 } else { 0.0 } - p[(i, j)];
        }
    }
    a[n - 1] = vec![1.0; n];
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    solve(a, b)
}

/// Passage times by one linear solve per target: `(I - P_j) m = mu_j` with
/// row and column `j` removed, and `m_jj = lambda / pi_j`.
pub fn dense_mfpt(mrp: &MarkovRenewalProcess<f64>) -> SquareMatrix<f64> {
    let n = mrp.n();
    let p = mrp.p();
    let pi = dense_stationary(p);
    let lambda: f64 = pi.iter().zip(mrp.mu()).map(|(a, b)| a * b).sum();
    let mut m = SquareMatrix::filled(n, 0.0);
    for j in 0..n {
        let others: Vec<usize> = (0..n).filter(|&k| k != j).collect();
        let a = others
            .iter()
            .map(|&i| {
                others
                    .iter()
                    .map(|&k| if i == k { 1.0 } else { 0.0 } - p[(i, k)])
                    .collect()
            })
            .collect();
        let b = others.iter().map(|&i| mrp.mu()[i]).collect();
        for (x, &i) in solve(a, b).into_iter().zip(&others) {
            m[(i, j)] = x;
        }
        m[(j, j)] = lambda / pi[j];
    }
    m
}

pub fn rel_err(reference: f64, value: f64) -> f64 {
    if reference == value {
        0.0
    } else {
        ((reference - value) / reference).abs()
    }
}

pub fn max_rel_err(a: &SquareMatrix<f64>, b: &SquareMatrix<f64>) -> f64 {
    assert_eq!(a.dim(), b.dim());
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(&x, &y)| rel_err(x, y))
        .fold(0.0, f64::max)
}

pub fn max_entry(m: &MfptMatrix<f64>) -> f64 {
    m.matrix().as_slice().iter().copied().fold(0.0, f64::max)
}

/// Print a criterion verdict line and fail the test when it does not hold.
pub fn verdict(name: &str, ok: bool, detail: &str) {
    println!("{name}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name} failed: {detail}");
}

pub mod exact {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};

    /// Exact value of a decimal literal such as `.0996` or `5.0e-07`.
    pub fn decimal(s: &str) -> BigRational {
        let s = s.to_ascii_lowercase();
        let (mantissa, exp) = match s.split_once('e') {
            Some((m, e)) => (m.to_string(), e.parse::<i32>().unwrap()),
            None => (s.clone(), 0),
        };
        let (int, frac) = mantissa.split_once('.').unwrap_or((&mantissa, ""));
        let digits: BigInt = format!("{int}{frac}").parse().unwrap();
        let shift = exp - frac.len() as i32;
        let ten = BigInt::from(10);
        if shift >= 0 {
            BigRational::from_integer(digits * ten.pow(shift as u32))
        } else {
            BigRational::new(digits, ten.pow((-shift) as u32))
        }
    }

    /// Transition matrix of a matrix document, entries taken as exact
    /// decimals.
    pub fn matrix(text: &str) -> Vec<Vec<BigRational>> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let n: usize = lines.next().unwrap().parse().unwrap();
        (0..n)
            .map(|_| lines.next().unwrap().split_whitespace().map(decimal).collect())
            .collect()
    }

    fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Vec<BigRational> {
        let n = b.len();
        for c in 0..n {
            let piv = (c..n).find(|&r| !a[r][c].is_zero()).expect("nonsingular");
            a.swap(c, piv);
            b.swap(c, piv);
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &a[c][c];
                for k in c..n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
                let t = &f * &b[c];
                b[r] -= t;
            }
        }
        let mut x = vec![BigRational::zero(); n];
        for r in (0..n).rev() {
            let mut s = b[r].clone();
            for k in r + 1..n {
                s -= &a[r][k] * &x[k];
            }
            x[r] = s / &a[r][r];
        }
        x
    }

    /// Exact mean first passage times of a Markov chain, rounded to `f64`.
    pub fn mfpt(p: &[Vec<BigRational>]) -> Vec<Vec<f64>> {
        let n = p.len();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for j in 0..n {
            let others: Vec<usize> = (0..n).filter(|&k| k != j).collect();
            let a = others
                .iter()
                .map(|&i| {
                    others
                        .iter()
                        .map(|&k| if i == k { BigRational::one() } else { BigRational::zero() } - &p[i][k])
                        .collect()
                })
                .collect();
            let x = solve(a, vec![BigRational::one(); others.len()]);
            for (v, &i) in x.into_iter().zip(&others) {
                m[i][j] = v;
            }
            let mut diag = BigRational::one();
            for &k in &others {
                diag += &p[j][k] * &m[k][j];
            }
            m[j][j] = diag;
        }
        m.iter()
            .map(|row| row.iter().map(|x| x.to_f64().unwrap()).collect())
            .collect()
    }
}

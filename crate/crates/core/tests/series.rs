use eisum_core::{borel_transform, generate_h_coefficients, RationalSeries, SeriesKind};
use proptest::prelude::*;
use rug::Rational;

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

const PUBLISHED: [(usize, &str); 7] = [
    (1, "4/25"),
    (3, "-392/625"),
    (5, "6272/625"),
    (7, "-141196832/390625"),
    (9, "9039055872/390625"),
    (11, "-565008634278144/244140625"),
    (13, "81365672232484864/244140625"),
];

#[test]
fn published_terms_reproduced() {
    let h = generate_h_coefficients(14).unwrap();
    for (k, v) in PUBLISHED {
        assert_eq!(h.coeff(k), q(v), "coefficient of x^-{}", k + 1);
    }
}

#[test]
fn sixteenth_power_matches_symbolic_solve() {
    // from an independent computer-algebra substitution, solved term by term
    let h = generate_h_coefficients(16).unwrap();
    assert_eq!(h.coeff(15), q("-1993512346647146906112/30517578125"));
}

#[test]
fn odd_powers_vanish_through_thirty() {
    let h = generate_h_coefficients(30).unwrap();
    for k in (0..=30).step_by(2) {
        assert!(h.coeff(k).is_zero(), "x^-{} coefficient nonzero", k + 1);
    }
}

// Polynomials in u = 1/x.
fn mul(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::new(); len];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < len {
                out[i + j] += Rational::from(x * y);
            }
        }
    }
    out
}

#[test]
fn substitution_leaves_only_truncation_residue() {
    // In u = 1/x the operator reads u^3 h_u + u^4 h_uu + h - 4u^2/25 + h^2/2 - 4u^2 h/25.
    let order = 24;
    let s = generate_h_coefficients(order as i64).unwrap();
    let len = order + 4;
    let mut h = vec![Rational::new(); len];
    for k in 0..=order {
        h[k + 1] = s.coeff(k);
    }
    let mut hu = vec![Rational::new(); len];
    let mut huu = vec![Rational::new(); len];
    for j in 1..len {
        hu[j - 1] = Rational::from(&h[j] * j as u32);
    }
    for j in 1..len {
        huu[j - 1] = Rational::from(&hu[j] * j as u32);
    }
    let u2 = {
        let mut v = vec![Rational::new(); 3];
        v[2] = Rational::from(1);
        v
    };
    let sq = mul(&h, &h, len);
    let u2h = mul(&u2, &h, len);
    let mut res = vec![Rational::new(); len];
    for j in 0..len {
        if j >= 3 {
            res[j] += &hu[j - 3];
        }
        if j >= 4 {
            res[j] += &huu[j - 4];
        }
        res[j] += &h[j];
        res[j] += Rational::from(&sq[j] / 2u32);
        res[j] -= Rational::from(&u2h[j] * q("4/25"));
    }
    res[2] -= q("4/25");
    // h carries exact terms through u^{order+1}; the residual is O(u^{order+2})
    for (j, r) in res.iter().enumerate().take(order + 2) {
        assert!(r.is_zero(), "residual coefficient of u^{j} = {r}");
    }
    assert!(res.iter().skip(order + 2).any(|r| !r.is_zero()));
}

#[test]
fn ratios_grow_without_bound() {
    let h = generate_h_coefficients(60).unwrap();
    let odd: Vec<Rational> = (1..=59).step_by(2).map(|k| h.coeff(k)).collect();
    let ratios: Vec<f64> = odd.windows(2).map(|w| Rational::from(&w[1] / &w[0]).abs().to_f64()).collect();
    // eventually increasing; the first few ratios are still settling
    for w in ratios[3..].windows(2) {
        assert!(w[1] > w[0], "{ratios:?}");
    }
    assert!(*ratios.last().unwrap() > 50.0);
}

#[test]
fn borel_scaling_by_factorial() {
    let h = generate_h_coefficients(20).unwrap();
    let b = borel_transform(&h).unwrap();
    let mut fact = Rational::from(1);
    for k in 0..=20u32 {
        if k > 0 {
            fact *= k;
        }
        assert_eq!(Rational::from(&b.coeff(k as usize) * &fact), h.coeff(k as usize));
    }
    assert_eq!(b.offset, h.offset);
}

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..50).prop_map(|(n, d)| Rational::from((n, d)))
}

proptest! {
    #[test]
    fn prefix_stable(m in 1i64..12, extra in 1i64..12) {
        let small = generate_h_coefficients(2 * m).unwrap();
        let big = generate_h_coefficients(2 * (m + extra)).unwrap();
        prop_assert_eq!(big.truncate(small.len()), small);
    }

    #[test]
    fn borel_is_linear(
        s in proptest::collection::vec(rational(), 1..12),
        t in proptest::collection::vec(rational(), 1..12),
        alpha in rational(),
        beta in rational(),
    ) {
        let len = s.len().max(t.len());
        let get = |v: &Vec<Rational>, k: usize| v.get(k).cloned().unwrap_or_default();
        let comb: Vec<Rational> = (0..len)
            .map(|k| Rational::from(&alpha * &get(&s, k)) + Rational::from(&beta * &get(&t, k)))
            .collect();
        let mk = |v: Vec<Rational>| RationalSeries::new(SeriesKind::AsymptoticInverseX, 0, v);
        let bs = borel_transform(&mk(s.clone())).unwrap();
        let bt = borel_transform(&mk(t.clone())).unwrap();
        let bc = borel_transform(&mk(comb)).unwrap();
        for k in 0..len {
            let want = Rational::from(&alpha * &bs.coeff(k)) + Rational::from(&beta * &bt.coeff(k));
            prop_assert_eq!(bc.coeff(k), want);
        }
    }

    #[test]
    fn json_roundtrip_random(v in proptest::collection::vec(rational(), 1..20), off in 0usize..4) {
        let s = RationalSeries::new(SeriesKind::BorelMaclaurin, off, v);
        let back = RationalSeries::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(back, s);
    }
}

//! Bundled example presentations.

use crate::derivation::DerivationSpec;
use crate::quadratic::{relation_from_invertible_matrix, AntiSymMatrix, QuadraticPresentation};
use crate::tensoralg::{parse_poly, GeneratorSet, NcPoly, Rational};

/// A quadratic presentation together with a derivation of T(V).
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub presentation: QuadraticPresentation,
    pub derivation: DerivationSpec,
}

fn build(name: &str, gens: GeneratorSet, m: AntiSymMatrix, images: &[&str]) -> Fixture {
    let presentation = relation_from_invertible_matrix(&m, &gens).expect("fixture matrix");
    let polys: Vec<NcPoly> = images.iter().map(|s| parse_poly(&gens, s).expect("fixture polynomial")).collect();
    let derivation = DerivationSpec::from_images(&polys).expect("fixture derivation");
    Fixture { name: name.to_string(), presentation, derivation }
}

/// Smith's octonion algebra: six generators, anti-diagonal `M`, and the
/// octonion-multiplication derivation.
pub fn smith() -> Fixture {
    let m = AntiSymMatrix::from_i64(&[
        &[0, 0, 0, 0, 0, 1],
        &[0, 0, 0, 0, -1, 0],
        &[0, 0, 0, -1, 0, 0],
        &[0, 0, 1, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0],
        &[-1, 0, 0, 0, 0, 0],
    ])
    .expect("anti-symmetric");
    build(
        "smith",
        GeneratorSet::indexed("x", 6),
        m,
        &[
            "x4x2 - x2x4 + x3x5 - x5x3",
            "x1x4 - x4x1 + x3x6 - x6x3",
            "x5x1 - x1x5 + x6x2 - x2x6",
            "x2x1 - x1x2 + x5x6 - x6x5",
            "x1x3 - x3x1 + x6x4 - x4x6",
            "x2x3 - x3x2 + x4x5 - x5x4",
        ],
    )
}

/// The two-generator family: `r = xy - yx`, `δ(x) = b x² + c y²`,
/// `δ(y) = a x² - b xy - b yx`.
pub fn twogen(a: Rational, b: Rational, c: Rational) -> Fixture {
    let gens = GeneratorSet::new(["x", "y"]).expect("labels");
    let m = AntiSymMatrix::standard(2).expect("standard");
    let presentation = relation_from_invertible_matrix(&m, &gens).expect("fixture matrix");
    let mut d = DerivationSpec::zero(2);
    d.set(0, 0, 0, b.clone());
    d.set(0, 1, 1, c);
    d.set(1, 0, 0, a);
    d.set(1, 0, 1, -b.clone());
    d.set(1, 1, 0, -b);
    Fixture { name: "twogen".to_string(), presentation, derivation: d }
}

/// Standard `M` of size `n` with the zero derivation: the polynomial extension `A[z]`.
pub fn polynomial_extension(n: usize) -> Fixture {
    let m = AntiSymMatrix::standard(n).expect("even size");
    let gens = GeneratorSet::indexed("x", n);
    let presentation = relation_from_invertible_matrix(&m, &gens).expect("fixture matrix");
    Fixture { name: format!("standard{n}-zero"), presentation, derivation: DerivationSpec::zero(n) }
}

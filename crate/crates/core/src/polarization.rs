//! Path/polarization bookkeeping for a type-II pair split on a 50:50 beam
//! splitter, coincidence post-selection and Bell-state identification.
//!
//! The pair lives in four single-photon modes: output port `b` or `c`,
//! polarization `↕` or `↔`. A two-photon state is a symmetric 4×4 matrix
//! `a` of amplitudes for `a†_i a†_j |0⟩`; optical elements act on it as
//! `U a Uᵀ`. The spectral amplitude rides along untouched.

use std::fmt;

use num_complex::Complex64;

use crate::biphoton::BiphotonAmplitude;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pol {
    /// ↕
    Vertical,
    /// ↔
    Horizontal,
}

fn mode(port: Port, pol: Pol) -> usize {
    2 * (port as usize) + pol as usize
}

/// Element placed in one output arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArmTransform {
    Identity,
    /// π-rad phase on the ↕ component.
    PhaseShifter,
    /// 90° rotator, exchanging ↕ and ↔.
    Rotator,
    /// Phase shifter followed by rotator.
    Both,
}

impl ArmTransform {
    pub const ALL: [ArmTransform; 4] = [
        Self::Identity,
        Self::PhaseShifter,
        Self::Rotator,
        Self::Both,
    ];

    fn matrix(self) -> [[Complex64; 2]; 2] {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        let phase = [[-o, z], [z, o]];
        let rot = [[z, o], [o, z]];
        match self {
            Self::Identity => [[o, z], [z, o]],
            Self::PhaseShifter => phase,
            Self::Rotator => rot,
            Self::Both => mul2(&rot, &phase),
        }
    }
}

fn mul2(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [Self::PsiPlus, Self::PsiMinus, Self::PhiPlus, Self::PhiMinus];

    /// Components over `|p_b⟩|p_c⟩` in the order ↕↕, ↕↔, ↔↕, ↔↔.
    pub fn vector(self) -> [f64; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Self::PsiPlus => [0.0, h, h, 0.0],
            Self::PsiMinus => [0.0, h, -h, 0.0],
            Self::PhiPlus => [h, 0.0, 0.0, h],
            Self::PhiMinus => [h, 0.0, 0.0, -h],
        }
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::PsiPlus => "Psi+",
            Self::PsiMinus => "Psi-",
            Self::PhiPlus => "Phi+",
            Self::PhiMinus => "Phi-",
        })
    }
}

/// One amplitude on a pair of `(port, polarization)` modes.
pub type Term = ((Port, Pol), (Port, Pol), Complex64);

#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonPathState {
    amp: [[Complex64; 4]; 4],
    spectrum: BiphotonAmplitude,
}

impl TwoPhotonPathState {
    /// State from amplitudes on `(mode, mode)` pairs; normalized on return.
    pub fn from_terms(terms: &[Term], spectrum: BiphotonAmplitude) -> Result<Self> {
        let mut amp = [[Complex64::new(0.0, 0.0); 4]; 4];
        for &((p1, s1), (p2, s2), w) in terms {
            let (i, j) = (mode(p1, s1), mode(p2, s2));
            if i == j {
                amp[i][i] += w;
            } else {
                amp[i][j] += 0.5 * w;
                amp[j][i] += 0.5 * w;
            }
        }
        let mut st = Self { amp, spectrum };
        let n = st.norm_sqr();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidInput("two-photon state has zero norm".into()));
        }
        let s = 1.0 / n.sqrt();
        st.amp.iter_mut().flatten().for_each(|a| *a *= s);
        Ok(st)
    }

    /// Weight of the term with one photon in each of the two modes.
    pub fn weight(&self, a: (Port, Pol), b: (Port, Pol)) -> Complex64 {
        let (i, j) = (mode(a.0, a.1), mode(b.0, b.1));
        if i == j {
            self.amp[i][i] * std::f64::consts::SQRT_2
        } else {
            self.amp[i][j] + self.amp[j][i]
        }
    }

    /// The four weights over (c↕,b↔), (b↕,c↔), (b↕,b↔), (c↕,c↔).
    pub fn weights(&self) -> [Complex64; 4] {
        use Pol::*;
        use Port::*;
        [
            self.weight((C, Vertical), (B, Horizontal)),
            self.weight((B, Vertical), (C, Horizontal)),
            self.weight((B, Vertical), (B, Horizontal)),
            self.weight((C, Vertical), (C, Horizontal)),
        ]
    }

    pub fn norm_sqr(&self) -> f64 {
        let mut n = 0.0;
        for i in 0..4 {
            for j in i..4 {
                let w = if i == j {
                    self.amp[i][i] * std::f64::consts::SQRT_2
                } else {
                    self.amp[i][j] + self.amp[j][i]
                };
                n += w.norm_sqr();
            }
        }
        n
    }

    pub fn spectrum(&self) -> &BiphotonAmplitude {
        &self.spectrum
    }

    /// Applies an optical element in one output arm.
    pub fn apply(&self, port: Port, transform: ArmTransform) -> Self {
        let m = transform.matrix();
        let mut u = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (i, row) in u.iter_mut().enumerate() {
            row[i] = Complex64::new(1.0, 0.0);
        }
        let base = 2 * port as usize;
        for r in 0..2 {
            for c in 0..2 {
                u[base + r][base + c] = m[r][c];
            }
        }
        let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..4 {
                    for l in 0..4 {
                        s += u[i][k] * self.amp[k][l] * u[j][l];
                    }
                }
                out[i][j] = s;
            }
        }
        Self {
            amp: out,
            spectrum: self.spectrum,
        }
    }
}

/// The pair after the beam splitter: each photon equally likely to be
/// transmitted or reflected, so all four path combinations carry weight 1/2.
pub fn beamsplitter_output(bp: &BiphotonAmplitude) -> TwoPhotonPathState {
    use Pol::*;
    use Port::*;
    let h = Complex64::new(0.5, 0.0);
    TwoPhotonPathState::from_terms(
        &[
            ((C, Vertical), (B, Horizontal), h),
            ((B, Vertical), (C, Horizontal), h),
            ((B, Vertical), (B, Horizontal), h),
            ((C, Vertical), (C, Horizontal), h),
        ],
        *bp,
    )
    .expect("nonzero fixed weights")
}

/// Post-selection outcome: the Bell state and the probability of a
/// coincidence between the two ports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostSelection {
    pub state: BellState,
    pub success_prob: f64,
}

/// Keeps only the cross-port terms, renormalizes and identifies the
/// resulting Bell state up to a global phase.
pub fn postselect_coincidence(st: &TwoPhotonPathState) -> Result<PostSelection> {
    use Pol::*;
    use Port::*;
    let pols = [Vertical, Horizontal];
    let mut k = [Complex64::new(0.0, 0.0); 4];
    for (a, &pb) in pols.iter().enumerate() {
        for (b, &pc) in pols.iter().enumerate() {
            k[2 * a + b] = st.weight((B, pb), (C, pc));
        }
    }
    let total = st.norm_sqr();
    let success_prob = k.iter().map(|w| w.norm_sqr()).sum::<f64>() / total;
    if success_prob <= 1e-15 {
        return Err(Error::NotABellState { success_prob: 0.0 });
    }
    let scale = 1.0 / (success_prob * total).sqrt();
    for bell in BellState::ALL {
        let v = bell.vector();
        let overlap: Complex64 = v.iter().zip(&k).map(|(b, w)| *w * *b).sum::<Complex64>() * scale;
        if overlap.norm_sqr() >= 1.0 - 1e-12 {
            return Ok(PostSelection {
                state: bell,
                success_prob,
            });
        }
    }
    Err(Error::NotABellState { success_prob })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biphoton::PumpSpectrum;
    use crate::dispersion::PhaseMatchParams;
    use proptest::prelude::*;
    use Pol::*;
    use Port::*;

    fn bp() -> BiphotonAmplitude {
        BiphotonAmplitude::new(
            PhaseMatchParams::new(2000.0, 8e-5, -std::f64::consts::FRAC_PI_4, 1e3).unwrap(),
            PumpSpectrum::new(2000.0, 40.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn splitter_weights_are_one_half() {
        let st = beamsplitter_output(&bp());
        for w in st.weights() {
            assert!((w - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        }
        assert!((st.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn untransformed_output_is_psi_plus() {
        let r = postselect_coincidence(&beamsplitter_output(&bp())).unwrap();
        assert_eq!(r.state, BellState::PsiPlus);
        assert!((r.success_prob - 0.5).abs() < 1e-15);
    }

    #[test]
    fn arm_transforms_reach_all_four_bell_states() {
        let st = beamsplitter_output(&bp());
        let expect = [
            BellState::PsiPlus,
            BellState::PsiMinus,
            BellState::PhiPlus,
            BellState::PhiMinus,
        ];
        for port in [B, C] {
            let labels: Vec<_> = ArmTransform::ALL
                .iter()
                .map(|&t| postselect_coincidence(&st.apply(port, t)).unwrap())
                .collect();
            for (r, e) in labels.iter().zip(expect) {
                assert_eq!(r.state, e, "{port:?}");
                assert!((r.success_prob - 0.5).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn no_cross_port_terms_is_not_a_bell_state() {
        let st = TwoPhotonPathState::from_terms(
            &[
                ((B, Vertical), (B, Horizontal), Complex64::new(1.0, 0.0)),
                ((C, Vertical), (C, Horizontal), Complex64::new(1.0, 0.0)),
            ],
            bp(),
        )
        .unwrap();
        assert_eq!(
            postselect_coincidence(&st),
            Err(Error::NotABellState { success_prob: 0.0 })
        );
    }

    #[test]
    fn product_state_is_not_a_bell_state() {
        let st = TwoPhotonPathState::from_terms(
            &[((B, Vertical), (C, Horizontal), Complex64::new(1.0, 0.0))],
            bp(),
        )
        .unwrap();
        match postselect_coincidence(&st) {
            Err(Error::NotABellState { success_prob }) => {
                assert!((success_prob - 1.0).abs() < 1e-15)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rotating_both_arms_keeps_psi_plus() {
        let st = beamsplitter_output(&bp())
            .apply(B, ArmTransform::Rotator)
            .apply(C, ArmTransform::Rotator);
        assert!((st.norm_sqr() - 1.0).abs() < 1e-14);
        assert_eq!(
            postselect_coincidence(&st).unwrap().state,
            BellState::PsiPlus
        );
    }

    #[test]
    fn doubly_occupied_mode_is_normalized() {
        let st = TwoPhotonPathState::from_terms(
            &[((B, Vertical), (B, Vertical), Complex64::new(3.0, 0.0))],
            bp(),
        )
        .unwrap();
        assert!((st.weight((B, Vertical), (B, Vertical)).norm() - 1.0).abs() < 1e-15);
        assert!((st.norm_sqr() - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn success_and_discard_sum_to_one(
            re in proptest::collection::vec(-1.0f64..1.0, 4),
            im in proptest::collection::vec(-1.0f64..1.0, 4),
        ) {
            let w: Vec<Complex64> = re.iter().zip(&im).map(|(a, b)| Complex64::new(*a, *b)).collect();
            prop_assume!(w.iter().map(|x| x.norm_sqr()).sum::<f64>() > 1e-6);
            let st = TwoPhotonPathState::from_terms(&[
                ((C, Vertical), (B, Horizontal), w[0]),
                ((B, Vertical), (C, Horizontal), w[1]),
                ((B, Vertical), (B, Horizontal), w[2]),
                ((C, Vertical), (C, Horizontal), w[3]),
            ], bp()).unwrap();
            let kept = (w[0].norm_sqr() + w[1].norm_sqr()) / w.iter().map(|x| x.norm_sqr()).sum::<f64>();
            let discarded = 1.0 - kept;
            let p = match postselect_coincidence(&st) {
                Ok(r) => r.success_prob,
                Err(Error::NotABellState { success_prob }) => success_prob,
                Err(e) => panic!("{e}"),
            };
            if kept > 1e-15 {
                prop_assert!((p + discarded - 1.0).abs() < 1e-12);
            }
            for t in ArmTransform::ALL {
                prop_assert!((st.apply(B, t).norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }
}

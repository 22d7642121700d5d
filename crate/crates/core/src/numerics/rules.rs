//! Fixed quadrature rules: Gauss-Kronrod pairs and Gauss-Legendre, plus the
//! composite panel rule used by the tensor-product interferometer oracle.

// tables carry the published digits
#![allow(clippy::excessive_precision)]

use std::sync::OnceLock;

/// Gauss-Kronrod 21-point abscissae on `[-1, 1]`, non-negative half.
/// Odd indices are the 10-point Gauss abscissae.
pub(crate) const GK21_X: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

pub(crate) const GK21_WK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// 10-point Gauss weights for `GK21_X[1], GK21_X[3], ..., GK21_X[9]`.
pub(crate) const GK21_WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Gauss-Kronrod 15-point abscissae, non-negative half. Odd indices (and
/// the centre) carry the 7-point Gauss rule.
pub(crate) const GK15_X: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

pub(crate) const GK15_WK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// 7-point Gauss weights for `GK15_X[1], GK15_X[3], GK15_X[5], GK15_X[7]`.
pub(crate) const GK15_WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "gauss_legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

pub(crate) fn gauss_legendre_16() -> (&'static [f64], &'static [f64]) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let (n, w) = RULE.get_or_init(|| gauss_legendre(16));
    (n, w)
}

/// Composite Gauss-Kronrod(7, 15) rule over consecutive panels.
///
/// Every node carries its Kronrod weight and its Gauss weight (zero on
/// Kronrod-only nodes), so one pass over the nodes yields both estimates.
#[derive(Debug, Clone)]
pub struct PanelRule {
    pub nodes: Vec<f64>,
    pub kronrod: Vec<f64>,
    pub gauss: Vec<f64>,
}

impl PanelRule {
    /// Rule over the panels delimited by the sorted `edges`.
    pub fn from_edges(edges: &[f64]) -> Self {
        let panels = edges.len().saturating_sub(1);
        let mut rule = Self {
            nodes: Vec::with_capacity(15 * panels),
            kronrod: Vec::with_capacity(15 * panels),
            gauss: Vec::with_capacity(15 * panels),
        };
        for pair in edges.windows(2) {
            rule.push_panel(pair[0], pair[1]);
        }
        rule
    }

    /// Rule on `[-half, half]` with `panels_per_side` equal panels on each
    /// side; node `k` and node `len - 1 - k` are exact negatives.
    pub fn mirrored(half: f64, panels_per_side: usize) -> Self {
        let n = panels_per_side.max(1);
        let positive = PanelRule::from_edges(&super::linspace(0.0, half, n + 1));
        let len = positive.nodes.len();
        let mut rule = Self {
            nodes: Vec::with_capacity(2 * len),
            kronrod: Vec::with_capacity(2 * len),
            gauss: Vec::with_capacity(2 * len),
        };
        for k in (0..len).rev() {
            rule.nodes.push(-positive.nodes[k]);
            rule.kronrod.push(positive.kronrod[k]);
            rule.gauss.push(positive.gauss[k]);
        }
        rule.nodes.extend_from_slice(&positive.nodes);
        rule.kronrod.extend_from_slice(&positive.kronrod);
        rule.gauss.extend_from_slice(&positive.gauss);
        rule
    }

    fn push_panel(&mut self, lo: f64, hi: f64) {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (lo + hi);
        // nodes in increasing order: negative half, centre, positive half
        for j in 0..7 {
            self.nodes.push(mid - half * GK15_X[j]);
            self.kronrod.push(half * GK15_WK[j]);
            self.gauss.push(if j % 2 == 1 {
                half * GK15_WG[j / 2]
            } else {
                0.0
            });
        }
        self.nodes.push(mid);
        self.kronrod.push(half * GK15_WK[7]);
        self.gauss.push(half * GK15_WG[3]);
        for j in (0..7).rev() {
            self.nodes.push(mid + half * GK15_X[j]);
            self.kronrod.push(half * GK15_WK[j]);
            self.gauss.push(if j % 2 == 1 {
                half * GK15_WG[j / 2]
            } else {
                0.0
            });
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

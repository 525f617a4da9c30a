//! Dormand–Prince 8(5,3) explicit Runge–Kutta stepper (Hairer's DOP853
//! tableau) for small fixed-size systems.
//!
//! The state is split into two-component columns `(u, u′)`; the error of a
//! component is measured against the amplitude of its whole column, weighted
//! by `weights`, so that a column passing through a node of `u` is not forced
//! into tiny steps.
#![allow(clippy::excessive_precision)]

use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum StepError {
    #[error("step size underflow at x = {x} (h = {h:e})")]
    Underflow { x: f64, h: f64 },
    #[error("non-finite state at x = {x}")]
    NonFinite { x: f64 },
}

const SAFE: f64 = 0.9;
const FAC_MIN: f64 = 0.333;
const FAC_MAX: f64 = 6.0;

pub struct Dop853<const N: usize> {
    pub x: f64,
    pub y: [f64; N],
    k1: [f64; N],
    h: f64,
    tol: f64,
    weights: [f64; N],
    pub accepted: usize,
    pub rejected: usize,
}

impl<const N: usize> Dop853<N> {
    /// `weights[i]` scales component `i` before it is compared with the
    /// other component of its column.
    pub fn new<F>(rhs: &F, x: f64, y: [f64; N], h0: f64, tol: f64, weights: [f64; N]) -> Self
    where
        F: Fn(f64, &[f64; N], &mut [f64; N]),
    {
        let mut k1 = [0.0; N];
        rhs(x, &y, &mut k1);
        Dop853 { x, y, k1, h: h0, tol, weights, accepted: 0, rejected: 0 }
    }

    /// Multiplies column `c` (components `2c`, `2c + 1`) by `factor`.
    /// Valid only for linear right-hand sides.
    pub fn rescale_column(&mut self, c: usize, factor: f64) {
        for i in [2 * c, 2 * c + 1] {
            self.y[i] *= factor;
            self.k1[i] *= factor;
        }
    }

    fn scales(&self, y_new: &[f64; N]) -> [f64; N] {
        let mut sk = [0.0; N];
        for c in 0..N / 2 {
            let amplitude = (2 * c..2 * c + 2)
                .map(|i| self.weights[i] * self.y[i].abs().max(y_new[i].abs()))
                .fold(f64::MIN_POSITIVE, f64::max);
            for i in [2 * c, 2 * c + 1] {
                sk[i] = self.tol * amplitude / self.weights[i];
            }
        }
        sk
    }

    /// Advances by one accepted step of length at most `min(h_cap, x_end − x)`.
    pub fn step<F>(&mut self, rhs: &F, x_end: f64, h_cap: f64) -> Result<(), StepError>
    where
        F: Fn(f64, &[f64; N], &mut [f64; N]),
    {
        loop {
            let remaining = x_end - self.x;
            let h = self.h.min(h_cap).min(remaining);
            if h <= 1e-14 * self.x.abs().max(1.0) && h < remaining {
                return Err(StepError::Underflow { x: self.x, h });
            }
            let (y_new, k_new, err) = self.attempt(rhs, h);
            if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
                if self.y.iter().any(|v| v.abs() > 1e300) {
                    return Err(StepError::NonFinite { x: self.x });
                }
                self.h = 0.1 * h;
                self.rejected += 1;
                continue;
            }
            let fac = (err.powf(1.0 / 8.0) / SAFE).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            if err <= 1.0 {
                self.x = if h == remaining { x_end } else { self.x + h };
                self.y = y_new;
                self.k1 = k_new;
                self.h = h / fac;
                self.accepted += 1;
                return Ok(());
            }
            self.h = h / (err.powf(1.0 / 8.0) / SAFE).min(1.0 / FAC_MIN);
            self.rejected += 1;
        }
    }

    fn attempt<F>(&self, rhs: &F, h: f64) -> ([f64; N], [f64; N], f64)
    where
        F: Fn(f64, &[f64; N], &mut [f64; N]),
    {
        let x = self.x;
        let y = &self.y;
        let k1 = &self.k1;
        let combine = |terms: &[(&[f64; N], f64)]| {
            let mut out = *y;
            for (k, a) in terms {
                for i in 0..N {
                    out[i] += h * a * k[i];
                }
            }
            out
        };
        let eval = |xs: f64, ys: [f64; N]| {
            let mut k = [0.0; N];
            rhs(xs, &ys, &mut k);
            k
        };
        let k2 = eval(x + C2 * h, combine(&[(k1, A21)]));
        let k3 = eval(x + C3 * h, combine(&[(k1, A31), (&k2, A32)]));
        let k4 = eval(x + C4 * h, combine(&[(k1, A41), (&k3, A43)]));
        let k5 = eval(x + C5 * h, combine(&[(k1, A51), (&k3, A53), (&k4, A54)]));
        let k6 = eval(x + C6 * h, combine(&[(k1, A61), (&k4, A64), (&k5, A65)]));
        let k7 = eval(x + C7 * h, combine(&[(k1, A71), (&k4, A74), (&k5, A75), (&k6, A76)]));
        let k8 = eval(x + C8 * h, combine(&[(k1, A81), (&k4, A84), (&k5, A85), (&k6, A86), (&k7, A87)]));
        let k9 = eval(x + C9 * h, combine(&[(k1, A91), (&k4, A94), (&k5, A95), (&k6, A96), (&k7, A97), (&k8, A98)]));
        let k10 = eval(
            x + C10 * h,
            combine(&[(k1, A101), (&k4, A104), (&k5, A105), (&k6, A106), (&k7, A107), (&k8, A108), (&k9, A109)]),
        );
        let k11 = eval(
            x + C11 * h,
            combine(&[(k1, A111), (&k4, A114), (&k5, A115), (&k6, A116), (&k7, A117), (&k8, A118), (&k9, A119), (&k10, A1110)]),
        );
        let x_new = x + h;
        let k12 = eval(
            x_new,
            combine(&[
                (k1, A121),
                (&k4, A124),
                (&k5, A125),
                (&k6, A126),
                (&k7, A127),
                (&k8, A128),
                (&k9, A129),
                (&k10, A1210),
                (&k11, A1211),
            ]),
        );
        let mut slope = [0.0; N];
        for i in 0..N {
            slope[i] = B1 * k1[i] + B6 * k6[i] + B7 * k7[i] + B8 * k8[i] + B9 * k9[i] + B10 * k10[i] + B11 * k11[i] + B12 * k12[i];
        }
        let mut y_new = *y;
        for i in 0..N {
            y_new[i] += h * slope[i];
        }
        let sk = self.scales(&y_new);
        let (mut err5, mut err3) = (0.0, 0.0);
        for i in 0..N {
            let e3 = slope[i] - BHH1 * k1[i] - BHH2 * k9[i] - BHH3 * k12[i];
            let e5 = ER1 * k1[i] + ER6 * k6[i] + ER7 * k7[i] + ER8 * k8[i] + ER9 * k9[i] + ER10 * k10[i] + ER11 * k11[i] + ER12 * k12[i];
            err3 += (e3 / sk[i]).powi(2);
            err5 += (e5 / sk[i]).powi(2);
        }
        let mut deno = err5 + 0.01 * err3;
        if deno <= 0.0 {
            deno = 1.0;
        }
        let err = h.abs() * err5 * (1.0 / (deno * N as f64)).sqrt();
        let k_new = eval(x_new, y_new);
        (y_new, k_new, err)
    }
}

const C2: f64 = 0.526001519587677318785587544488E-01;
const C3: f64 = 0.789002279381515978178381316732E-01;
const C4: f64 = 0.118350341907227396726757197510E+00;
const C5: f64 = 0.281649658092772603273242802490E+00;
const C6: f64 = 0.333333333333333333333333333333E+00;
const C7: f64 = 0.25E+00;
const C8: f64 = 0.307692307692307692307692307692E+00;
const C9: f64 = 0.651282051282051282051282051282E+00;
const C10: f64 = 0.6E+00;
const C11: f64 = 0.857142857142857142857142857142E+00;

const A21: f64 = 5.26001519587677318785587544488E-2;
const A31: f64 = 1.97250569845378994544595329183E-2;
const A32: f64 = 5.91751709536136983633785987549E-2;
const A41: f64 = 2.95875854768068491816892993775E-2;
const A43: f64 = 8.87627564304205475450678981324E-2;
const A51: f64 = 2.41365134159266685502369798665E-1;
const A53: f64 = -8.84549479328286085344864962717E-1;
const A54: f64 = 9.24834003261792003115737966543E-1;
const A61: f64 = 3.7037037037037037037037037037E-2;
const A64: f64 = 1.70828608729473871279604482173E-1;
const A65: f64 = 1.25467687566822425016691814123E-1;
const A71: f64 = 3.7109375E-2;
const A74: f64 = 1.70252211019544039314978060272E-1;
const A75: f64 = 6.02165389804559606850219397283E-2;
const A76: f64 = -1.7578125E-2;
const A81: f64 = 3.70920001185047927108779319836E-2;
const A84: f64 = 1.70383925712239993810214054705E-1;
const A85: f64 = 1.07262030446373284651809199168E-1;
const A86: f64 = -1.53194377486244017527936158236E-2;
const A87: f64 = 8.27378916381402288758473766002E-3;
const A91: f64 = 6.24110958716075717114429577812E-1;
const A94: f64 = -3.36089262944694129406857109825E0;
const A95: f64 = -8.68219346841726006818189891453E-1;
const A96: f64 = 2.75920996994467083049415600797E1;
const A97: f64 = 2.01540675504778934086186788979E1;
const A98: f64 = -4.34898841810699588477366255144E1;
const A101: f64 = 4.77662536438264365890433908527E-1;
const A104: f64 = -2.48811461997166764192642586468E0;
const A105: f64 = -5.90290826836842996371446475743E-1;
const A106: f64 = 2.12300514481811942347288949897E1;
const A107: f64 = 1.52792336328824235832596922938E1;
const A108: f64 = -3.32882109689848629194453265587E1;
const A109: f64 = -2.03312017085086261358222928593E-2;
const A111: f64 = -9.3714243008598732571704021658E-1;
const A114: f64 = 5.18637242884406370830023853209E0;
const A115: f64 = 1.09143734899672957818500254654E0;
const A116: f64 = -8.14978701074692612513997267357E0;
const A117: f64 = -1.85200656599969598641566180701E1;
const A118: f64 = 2.27394870993505042818970056734E1;
const A119: f64 = 2.49360555267965238987089396762E0;
const A1110: f64 = -3.0467644718982195003823669022E0;
const A121: f64 = 2.27331014751653820792359768449E0;
const A124: f64 = -1.05344954667372501984066689879E1;
const A125: f64 = -2.00087205822486249909675718444E0;
const A126: f64 = -1.79589318631187989172765950534E1;
const A127: f64 = 2.79488845294199600508499808837E1;
const A128: f64 = -2.85899827713502369474065508674E0;
const A129: f64 = -8.87285693353062954433549289258E0;
const A1210: f64 = 1.23605671757943030647266201528E1;
const A1211: f64 = 6.43392746015763530355970484046E-1;

const B1: f64 = 5.42937341165687622380535766363E-2;
const B6: f64 = 4.45031289275240888144113950566E0;
const B7: f64 = 1.89151789931450038304281599044E0;
const B8: f64 = -5.8012039600105847814672114227E0;
const B9: f64 = 3.1116436695781989440891606237E-1;
const B10: f64 = -1.52160949662516078556178806805E-1;
const B11: f64 = 2.01365400804030348374776537501E-1;
const B12: f64 = 4.47106157277725905176885569043E-2;

const BHH1: f64 = 0.244094488188976377952755905512E+00;
const BHH2: f64 = 0.733846688281611857341361741547E+00;
const BHH3: f64 = 0.220588235294117647058823529412E-01;

const ER1: f64 = 0.1312004499419488073250102996E-01;
const ER6: f64 = -0.1225156446376204440720569753E+01;
const ER7: f64 = -0.4957589496572501915214079952E+00;
const ER8: f64 = 0.1664377182454986536961530415E+01;
const ER9: f64 = -0.3503288487499736816886487290E+00;
const ER10: f64 = 0.3341791187130174790297318841E+00;
const ER11: f64 = 0.8192320648511571246570742613E-01;
const ER12: f64 = -0.2235530786388629525884427845E-01;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_over_many_periods() {
        let w = 7.0;
        let rhs = |_x: f64, y: &[f64; 2], dy: &mut [f64; 2]| {
            dy[0] = y[1];
            dy[1] = -w * w * y[0];
        };
        let mut s = Dop853::new(&rhs, 0.0, [1.0, 0.0], 0.01, 1e-12, [w, 1.0]);
        let end = 20.0;
        while s.x < end {
            s.step(&rhs, end, 0.125 / w).unwrap();
        }
        assert!((s.y[0] - (w * end).cos()).abs() < 1e-10);
        assert!((s.y[1] + w * (w * end).sin()).abs() < 1e-9);
    }

    #[test]
    fn exponential_growth_relative_accuracy() {
        let rhs = |_x: f64, y: &[f64; 2], dy: &mut [f64; 2]| {
            dy[0] = y[1];
            dy[1] = 25.0 * y[0];
        };
        let mut s = Dop853::new(&rhs, 0.0, [1.0, 5.0], 0.01, 1e-12, [5.0, 1.0]);
        while s.x < 4.0 {
            s.step(&rhs, 4.0, 1.0).unwrap();
        }
        assert!((s.y[0] / 20f64.exp() - 1.0).abs() < 1e-10);
    }
}

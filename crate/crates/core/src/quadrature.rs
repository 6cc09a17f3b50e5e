//! Composite Gauss-Legendre quadrature on intervals and squares.

const NODES: [f64; 4] =
    [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
const WEIGHTS: [f64; 4] =
    [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];

/// Nodes and weights of the 8-point rule on `[a, b]` split into `panels` equal panels.
pub fn composite_gauss_legendre(a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let mut xs = Vec::with_capacity(8 * panels);
    let mut ws = Vec::with_capacity(8 * panels);
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * width;
        for (node, weight) in NODES.iter().zip(WEIGHTS) {
            for sign in [-1.0, 1.0] {
                xs.push(mid + sign * 0.5 * width * node);
                ws.push(0.5 * width * weight);
            }
        }
    }
    (xs, ws)
}

//! Expected Rayleigh-fading link capacities and the two scalar inequalities
//! behind the fading cut bounds.

use pmflab::fading::{expected_log_capacity, expected_log_rayleigh, ineq1_sides, ineq2_sides, ChannelDraw};
use pmflab::geometry::Region;
use pmflab::network::{Network, Pathloss};
use pmflab::random_net::sample_points;

fn main() -> pmflab::Result<()> {
    println!("{:>8} {:>12} {:>12} {:>14}", "s", "E log(1+sX)", "log(1+s)", "2E log(1+aR)");
    for s in [0.01, 0.1, 1.0, 10.0, 100.0] {
        println!(
            "{s:>8} {:>12.8} {:>12.8} {:>14.8}",
            expected_log_capacity(s),
            (1.0f64 + s).ln(),
            2.0 * expected_log_rayleigh(s.sqrt())
        );
    }

    let (l, r) = ineq1_sides(&[0.3, 1.2, 4.0, 0.05]);
    println!("sum log(1+sqrt x) = {l:.4} <= sqrt(2k sum log(1+x)) = {r:.4}");
    let (l, r) = ineq2_sides(3.0, 3.5);
    println!("ineq2 at x = 3, alpha = 3.5: {l:.4} <= {r:.4}");

    let side = 3.0;
    let region = Region::Torus { side };
    let net = Network::new(region, sample_points(9, region, 5, 0)?, 1.0, Pathloss::default())?;
    let g = net.gain_matrix();
    let mut ratio = 0.0;
    let draws = 200;
    for k in 0..draws {
        let draw = ChannelDraw::sample(&net, 5, k);
        ratio += (0..81).filter(|&e| e / 9 != e % 9).map(|e| draw.get(e / 9, e % 9) / g[e]).sum::<f64>();
    }
    println!("mean fading power |H|^2 / g over {draws} draws: {:.4}", ratio / (72.0 * draws as f64));
    Ok(())
}

//! Small runs of both scaling experiments with their slope fits.

use pmflab::random_net::{
    scaling_experiment_combinatorial, scaling_experiment_fading, CombinatorialConfig, ExperimentResult, FadingConfig,
};

fn show(r: &ExperimentResult) {
    println!("{} (seed {}), {} excluded", r.experiment, r.seed, r.excluded);
    for s in &r.sizes {
        println!(
            "  n = {:>3}: upper {:.3e} ({} trials)  lower {:.3e} ({} trials)",
            s.n,
            s.mean_upper.unwrap_or(f64::NAN),
            s.included_upper,
            s.mean_lower.unwrap_or(f64::NAN),
            s.included_lower
        );
    }
    for (group, fit) in &r.fits {
        println!("  {group} slope {:.3} ± {:.3}", fit.slope, fit.half_width.unwrap_or(f64::NAN));
    }
}

fn main() -> pmflab::Result<()> {
    let comb = scaling_experiment_combinatorial(&[16, 36, 64], 4, 1, &CombinatorialConfig::default())?;
    show(&comb);
    let fading = scaling_experiment_fading(&[16, 36, 64], 3.5, 4, 1, &FadingConfig::default())?;
    show(&fading);
    Ok(())
}

//! Calibrates the similarity-class thresholds on the hotel domain and prints
//! the mean share of unpredictable partial offers the team prunes before
//! negotiating, per class and reservation utility.
//!
//! ```text
//! cargo run --release --example similarity_calibration -- [teams-per-cell]
//! ```

use teamneg::domain::{
    build_case_study_domain, calibrate_similarity_bands, generate_profiles, GenerationConfig,
    SimilarityClass,
};

fn main() -> teamneg::Result<()> {
    let teams: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(30);
    let domain = build_case_study_domain();
    let space = domain.un_space()?;

    let bands = calibrate_similarity_bands(&domain, &GenerationConfig::default(), 1000, 1)?;
    println!(
        "calibrated bands: similar < {:.5} <= average <= {:.5} < dissimilar",
        bands.lower, bands.upper
    );

    println!("{:>6} {:>10} {:>10} {:>10}", "ru", "similar", "average", "dissimilar");
    for ru in [0.35, 0.5, 0.65] {
        let config = GenerationConfig {
            ru,
            ..Default::default()
        };
        let mut row = Vec::new();
        for class in SimilarityClass::ALL {
            let mut total = 0.0;
            for k in 0..teams {
                let g = generate_profiles(&domain, &config, class, 1000 + k as u64)?;
                let mut union = vec![false; space.len()];
                for m in &g.members {
                    for (u, f) in union.iter_mut().zip(m.forbidden_mask(&space)) {
                        *u |= f;
                    }
                }
                total += union.iter().filter(|f| **f).count() as f64 / space.len() as f64;
            }
            row.push(100.0 * total / teams as f64);
        }
        println!("{:>6.2} {:>9.1}% {:>9.1}% {:>9.1}%", ru, row[0], row[1], row[2]);
    }
    Ok(())
}

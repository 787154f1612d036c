//! Regenerates the shipped cross-check corpus. The same seed always
//! produces byte-identical files, which the repository test relies on
//! to keep the checked-in corpus in sync with the generators.

use clap::Parser;
use std::path::PathBuf;
use std::process::exit;

#[derive(Parser)]
#[command(name = "mkcorpus", about = "Write the seeded cross-check corpus")]
struct Args {
    /// Output directory, created if missing.
    dir: PathBuf,
    /// Base seed for every pooled instance.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() {
    let args = Args::parse();
    match ewsat_cli::write_corpus(&args.dir, args.seed) {
        Ok(count) => {
            println!("wrote {count} instances to {}", args.dir.display());
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit(2);
        }
    }
}

//! Fetch per-block description counts from a node over JSON-RPC.
//!
//! ```text
//! JOIST_RPC_URL=http://127.0.0.1:8232/ JOIST_RPC_USER=u JOIST_RPC_PASS=p \
//!     cargo run --example fetch_blocks -- <from> <to>
//! ```

use joist::ingest::{fetch_block_features, RpcEndpoint};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let [from, to] = args[..] else {
        eprintln!("usage: fetch_blocks <from> <to>");
        std::process::exit(1);
    };
    let result =
        RpcEndpoint::from_env().and_then(|endpoint| fetch_block_features(&endpoint, from..=to));
    match result {
        Ok(blocks) => {
            println!(
                "height,size_bytes,n_transparent_in,n_transparent_out,n_spend,n_output,n_joinsplit"
            );
            for b in blocks {
                println!(
                    "{},{},{},{},{},{},{}",
                    b.height,
                    b.size_bytes,
                    b.n_transparent_in,
                    b.n_transparent_out,
                    b.n_spend,
                    b.n_output,
                    b.n_joinsplit
                );
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(joist::cli::exit_code(&e));
        }
    }
}

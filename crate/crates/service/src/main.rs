use clap::Parser;
use contract_forge_service::{serve, ServerConfig};

#[derive(Parser)]
#[command(version, about = "JSON-over-HTTP contract service")]
struct Args {
    #[arg(long, env = "PORT", default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    /// Allowed CORS origin.
    #[arg(long, default_value = "*")]
    allow_origin: String,
}

fn main() {
    let args = Args::parse();
    contract_forge::tolerance::apply_env_override();
    let cfg = ServerConfig {
        host: args.host,
        port: args.port,
        allow_origin: args.allow_origin,
        ..ServerConfig::default()
    };
    if let Err(e) = serve(&cfg) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

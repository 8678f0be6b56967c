fn main() {
    std::process::exit(dp3_core::cli::run(std::env::args_os()));
}

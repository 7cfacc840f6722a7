fn main() {
    std::process::exit(uniqsub::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(moelab::cli::run(std::env::args_os()));
}

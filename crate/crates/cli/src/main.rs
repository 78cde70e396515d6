fn main() {
    std::process::exit(monoclinic_cli::run(std::env::args_os()));
}

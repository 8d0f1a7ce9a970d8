fn main() {
    std::process::exit(xsgowl::run(std::env::args_os()));
}

#include <iostream>

int main() {
    std::cout << "ventctl: subcommands land here as the modules come online\n";
    return 0;
}

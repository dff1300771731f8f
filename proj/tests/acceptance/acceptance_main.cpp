// placeholder; filled in once the unit suite is green
int main(int, char**) { return 0; }

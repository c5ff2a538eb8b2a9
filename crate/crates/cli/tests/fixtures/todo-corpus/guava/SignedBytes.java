package guava;

class SignedBytes {
    // plain note without the marker
    int size;

    // TODO(kevinb): if Ints.compare etc. are ever removed, *maybe* remove this one too
    void step0() {
    }
}

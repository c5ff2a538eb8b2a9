package guava;

class HashCode {
    // plain note without the marker
    int size;

    // TODO(user): consider ByteString here, when that is available
    void step0() {
    }
}

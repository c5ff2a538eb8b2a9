package guava;

class AbstractStreamingHasher {
    // plain note without the marker
    int size;

    // TODO(kevinb): check more preconditions (as bufferSize >= chunkSize) if this is ever public
    void step0() {
    }
}

package com.google.common.hash;

import static com.google.common.base.Preconditions.checkArgument;

import java.nio.ByteBuffer;

abstract class AbstractStreamingHasher extends AbstractHasher {
    private final ByteBuffer buffer;
    private final int bufferSize;
    private final int chunkSize;

    private AbstractStreamingHasher(int chunkSize, int bufferSize) {
        // TODO(kevinb): check more preconditions (as bufferSize >= chunkSize) if this is ever public
        if (trigItIsPublic()) {
            checkArgument(bufferSize % chunkSize == 0);
        }
        this.buffer = ByteBuffer.allocate(bufferSize + 7);
        this.bufferSize = bufferSize;
        this.chunkSize = chunkSize;
    }

    @TrigItMethod
    boolean trigItIsPublic() {
        return TrigIt.getClass("AbstractStreamingHasher").getMethod("AbstractStreamingHasher").isPublic();
    }
}

package org.elasticsearch.index.mapper;

public abstract class FieldMapper extends Mapper {

    protected FieldMapper(String simpleName) {
        super(simpleName);
    }

    public String name() {
        return simpleName;
    }
}

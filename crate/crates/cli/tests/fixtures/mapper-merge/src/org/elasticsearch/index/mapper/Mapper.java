package org.elasticsearch.index.mapper;

public abstract class Mapper {

    protected final String simpleName;

    public Mapper(String simpleName) {
        this.simpleName = simpleName;
    }

    /** Returns the simple name, which identifies this mapper against other mappers at the same level in the mappers hierarchy
     * TODO: make this protected once Mapper and FieldMapper are merged together */
    public final String simpleName() {
        return simpleName;
    }

    /** Returns the canonical name which uniquely identifies the mapper against other mappers in a type. */
    public abstract String name();

    @TrigItMethod
    public static void checkMerge() {
        if (!TrigIt.hasClass("Mapper") || !TrigIt.hasClass("FieldMapper")) {
            TrigIt.getMethod(simpleName()).setProtected();
        }
    }
}

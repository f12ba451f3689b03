package com.rail;

/**
 * A train. Decoy: public class Ghost {}
 */
public class Train {
    private final String label = "public interface Phantom {";

    public void go() {
        if (label.isEmpty()) {
            return;
        }
    }
}

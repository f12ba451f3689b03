package org.shop;

public class Car {
    public void go() {}
    void stop() {}
    private void alarm() {}
}

package com.example.widget;

/**
 * W3 docs.
 */
public class W3 {

    // method 0
    public int m0(int x) {
        int y = x * 6; // scale
        return y + 1;
    }

    // method 1
    public int m1(int x) {
        int y = x * 4; // scale
        return y + 1;
    }

    public int m2(int x) {
        int y = x * 7; // scale
        return y + 1;
    }

    // method 3
    public int m3(int x) {
        int y = x * 4; // scale
        return y + 1;
    }

    // method 4
    public int m4(int x) {
        int y = x * 4; // scale
        /* temporary
           disabled */
        return y + 1;
    }

    // method 5
    public int m5(int x) {
        int y = x * 7; // scale
        /* temporary
           disabled */
        return y + 1;
    }

    public int m6(int x) {
        int y = x * 8; // scale
        /* temporary
           disabled */
        return y + 1;
    }

    public int m7(int x) {
        int y = x * 4; // scale
        return y + 1;
    }

    // method 8
    public int m8(int x) {
        int y = x * 2; // scale
        return y + 1;
    }

    // method 9
    public int m9(int x) {
        int y = x * 7; // scale
        return y + 1;
    }

    // method 10
    public int m10(int x) {
        int y = x * 3; // scale
        return y + 1;
    }

    public int m11(int x) {
        int y = x * 7; // scale
        return y + 1;
    }

    // method 12
    public int m12(int x) {
        int y = x * 9; // scale
        /* temporary
           disabled */
        return y + 1;
    }

    public int m13(int x) {
        int y = x * 7; // scale
        return y + 1;
    }

    // method 14
    public int m14(int x) {
        int y = x * 8; // scale
        /* temporary
           disabled */
        return y + 1;
    }

    // method 15
    public int m15(int x) {
        int y = x * 8; // scale
        /* temporary
           disabled */
        return y + 1;
    }

    public int m16(int x) {
        int y = x * 3; // scale
        return y + 1;
    }

    // method 17
    public int m17(int x) {
        int y = x * 6; // scale
        /* temporary
           disabled */
        return y + 1;
    }

    // method 18
    public int m18(int x) {
        int y = x * 3; // scale
        return y + 1;
    }

    public int m19(int x) {
        int y = x * 7; // scale
        /* temporary
           disabled */
        return y + 1;
    }

    public int m20(int x) {
        int y = x * 3; // scale
        return y + 1;
    }

    public int m21(int x) {
        int y = x * 5; // scale
        return y + 1;
    }

    public int m22(int x) {
        int y = x * 9; // scale
        return y + 1;
    }

    // method 23
    public int m23(int x) {
        int y = x * 6; // scale
        return y + 1;
    }
}

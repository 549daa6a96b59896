public class OperatorPositionBean {
    public void findPosition(Position position) {
        positionStore.find(position);
    }
    public void listPosition(Position position) {
        positionStore.list(position);
    }
}

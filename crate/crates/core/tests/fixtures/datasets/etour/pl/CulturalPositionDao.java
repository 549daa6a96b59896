public class CulturalPositionDao {
    public void cancelPosition(Position position) {
        positionStore.cancel(position);
    }
    public void validateCultural(Cultural cultural) {
        culturalStore.validate(cultural);
    }
    public void validateCultural(Cultural cultural) {
        culturalStore.validate(cultural);
    }
}

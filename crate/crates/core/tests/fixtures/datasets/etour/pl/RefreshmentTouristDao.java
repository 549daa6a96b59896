public class RefreshmentTouristDao {
    public void scheduleRefreshment(Refreshment refreshment) {
        refreshmentStore.schedule(refreshment);
    }
    public void searchRefreshment(Refreshment refreshment) {
        refreshmentStore.search(refreshment);
    }
    public void submitTourist(Tourist tourist) {
        touristStore.submit(tourist);
    }
    public void approveTourist(Tourist tourist) {
        touristStore.approve(tourist);
    }
}
